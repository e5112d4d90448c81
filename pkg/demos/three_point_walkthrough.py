"""
A three-point transition, end to end
====================================

Load the bundled three-element instance, check both connection matrices,
look at homology and a long exact sequence, then find every transition
matrix that respects the cover data.
"""


from gttm import gf2, io
from gttm.braid import homology, les, validate_connection_matrix
from gttm.poset import adjacent_pairs
from gttm.transition import certify_ucc, enumerate_gttm, verify_gttm

inst = io.load("example_2_12")
dom, cod = inst.pair()
print(inst.order)
print("basis:", dom.basis)

# both boundaries are degree -1, strictly upper triangular and square to zero
for name in ("delta_dom", "delta_cod"):
    print(name, validate_connection_matrix(dom.basis, inst.delta(name).matrix).summary())
print(dom.matrix)

# homology of the whole complex and of the single element "2"
print("H(P):", homology(dom).dims)
print("H({2}):", homology(dom, {"2"}).dims)

# a long exact sequence for each adjacent pair, with its connecting map
for pair in adjacent_pairs(dom.order):
    result = les(dom, pair)
    I, J = (sorted(s) for s in pair)
    print(f"LES {I} -> {J}: exact={result.exact}, connecting map rank={gf2.rank(result.connecting)}")

# the stored transition matrix passes every check
T = inst.transition()
print("stored T:", verify_gttm(T, dom, cod, inst.cover).ok)
print(T.matrix)

# enumeration finds it again, and it is the only solution
S = enumerate_gttm(dom, cod, inst.cover)
print(f"solutions: {S.size}, nullity {S.nullity}, T(2,3) = {S.particular().entry('2', '3')}")

# the entry linking 2 and 3 is forced, so there is a connecting orbit
cert = certify_ucc(S, inst.minimal_order, "2", "3")
print(cert.to_dict())

# a singular parameter value breaks the boundary condition
single = inst.subinstances["singular"]
for star in (0, 1):
    report = validate_connection_matrix(single.basis, single.with_parameters({"star": star}).delta().matrix)
    print(f"star={star}:", report.summary())
