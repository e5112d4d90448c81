"""Regenerate the bundled instance files in src/gttm/data.

The hand-written instances are spelled out here; the random regression
instances use a fixed seed and freeze the oracle pages.
"""

from pathlib import Path

import numpy as np

from gttm import io
from gttm.braid import ConnectionMatrix, GradedBasis
from gttm.morse import BlockTransition, MorseData, build_morse_complex
from gttm.poset import FinitePoset, intervals
from gttm.synthetic import random_filtered_complex
from gttm.sweeping import ss_oracle
from gttm.transition import CoverData, IntervalCover, TransitionCandidate
from gttm.braid import homology

DATA = Path(__file__).resolve().parents[1] / "src" / "gttm" / "data"


def matrix(basis, entries):
    M = np.zeros((len(basis), len(basis)), dtype=np.uint8)
    for r, c in entries:
        M[basis.index(r), basis.index(c)] = 1
    return M


def example_2_12():
    P = FinitePoset.chain(["1", "2", "3"])
    B = GradedBasis([("1", "1", 0), ("2", "2", 1), ("3", "3", 1)], P)
    dom = ConnectionMatrix(B, matrix(B, [("1", "2")]))
    cod = ConnectionMatrix(B, matrix(B, [("1", "2"), ("1", "3")]))
    T = TransitionCandidate.on(B, matrix(B, [("1", "1"), ("2", "2"), ("3", "3"), ("2", "3")]))
    covers = {}
    for I in intervals(P):
        if I:
            covers[I] = IntervalCover.identity(homology(dom, I).rep_degrees)
    # on {2, 3} the class of each rest point is read through the chosen index generators
    covers[frozenset({"2", "3"})] = IntervalCover((1, 1), [[0, 1], [1, 0]], [[0, 1], [1, 1]], np.eye(2))

    lam = [f"l{i}" for i in (1, 2, 3)]
    mu = [f"m{i}" for i in (1, 2, 3)]
    Q = FinitePoset.chain(lam + mu)
    SB = GradedBasis(
        [("l1", "l1", 0), ("l2", "l2", 1), ("l3", "l3", 1), ("m1", "m1", 1), ("m2", "m2", 2), ("m3", "m3", 2)], Q
    )
    entries = [("l1", "l2"), ("l1", "m1"), ("l2", "m2"), ("l2", "m3"), ("l3", "m3"), ("m1", "m2"), ("m1", "m3")]
    singular = io.Instance(
        name="singular transition matrix with parameter entry star = (l2, m3)",
        order=Q,
        basis=SB,
        matrices={"delta": ConnectionMatrix(SB, matrix(SB, entries), check=False)},
        parameters={"star": ("l2", "m3")},
    )
    return io.Instance(
        name="three rest points: two parameter values with different connection matrices",
        order=P,
        basis=B,
        matrices={"delta_dom": dom, "delta_cod": cod, "transition": T},
        cover=CoverData(covers),
        minimal_order=P,
        assumptions={"continuation": True, "morse_smale": False, "minimal_order": "flow order 1 < 2 < 3"},
        subinstances={"singular": singular},
        blocks=BlockTransition({0: [[1]], 1: [[1, 1], [0, 1]]}),
    )


def morse_instance(name, title, data: MorseData):
    delta = build_morse_complex(data)
    return io.Instance(
        name=title,
        order=delta.order,
        basis=delta.basis,
        matrices={"delta": delta},
        morse=data,
        assumptions={"morse_smale": True},
    )


def random_instance(seed, size):
    rng = np.random.default_rng(seed)
    delta = random_filtered_complex(rng, size, max_degree=2)
    return io.Instance(
        name=f"random filtered complex, {size} generators, seed {seed}",
        order=delta.order,
        basis=delta.basis,
        matrices={"delta": delta},
        expected={"pages": [p.to_dict() for p in ss_oracle(delta)]},
    )


def main():
    files = {
        "example_2_12.json": example_2_12(),
        "double_well.json": morse_instance(
            "double_well",
            "double well on a line: minima a, b and a saddle s between them",
            MorseData((("a", 0), ("s", 1), ("b", 0)), ("a", "b", "s"), {("s", "a"): 1, ("s", "b"): 1}),
        ),
        "circle.json": morse_instance(
            "circle",
            "height function on a circle",
            MorseData((("m", 0), ("M", 1)), ("m", "M"), {("M", "m"): 2}),
        ),
        "torus.json": morse_instance(
            "torus",
            "height function on an upright torus",
            MorseData(
                (("min", 0), ("s1", 1), ("s2", 1), ("max", 2)),
                ("min", "s1", "s2", "max"),
                {("s1", "min"): 2, ("s2", "min"): 2, ("max", "s1"): 2, ("max", "s2"): 2},
            ),
        ),
        "rp2.json": morse_instance(
            "rp2",
            "minimal Morse function on the real projective plane",
            MorseData((("min", 0), ("s", 1), ("max", 2)), ("min", "s", "max"), {("s", "min"): 2, ("max", "s"): 2}),
        ),
        "sphere.json": morse_instance(
            "sphere",
            "sphere with two minima, a saddle and a maximum",
            MorseData(
                (("a", 0), ("b", 0), ("s", 1), ("max", 2)),
                ("a", "b", "s", "max"),
                {("s", "a"): 1, ("s", "b"): 1, ("max", "s"): 2},
            ),
        ),
        "random_1.json": random_instance(137, 6),
        "random_2.json": random_instance(107, 9),
        "random_3.json": random_instance(103, 12),
    }
    for name, inst in files.items():
        (DATA / name).write_text(io.dumps(inst), encoding="utf-8")
        print("wrote", name)


if __name__ == "__main__":
    main()
