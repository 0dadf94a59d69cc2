from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import rst_by_definition
from spinsing.automorphism import eta_datum, identity_datum, inessential_action, lift_action, make_datum
from spinsing.catalog import CATALOG, entry
from spinsing.errors import (
    BadPrimitiveIndex,
    GenusTooSmall,
    MissingThetaFlag,
    NotFromSpinDatum,
    NotInTable,
    QuasireflectionPresent,
    TrivialElement,
)
from spinsing.graph import genus, graph_from_genera
from spinsing.monomial import CoordinateSystem, Level, MonomialAction, group_closure
from spinsing.oracle import lifted_data
from spinsing.singularity import (
    WEIGHT_TABLE_ROWS,
    Verdict,
    block_contribution,
    canonical_oracle,
    classify_stratum,
    component_weight,
    eigen_exponents,
    pi_sing_image_test,
    rst_min,
    rst_sum,
    singularity_reduce,
    smoothness_criterion,
)
from spinsing.spin import elliptic_tails, make_labels, make_support

F = Fraction


def tail_coords():
    return CoordinateSystem.build(graph_from_genera([1, 3], [(0, 1)]), Level.U)


def pair_coords():
    return CoordinateSystem.build(graph_from_genera([1, 2], [(0, 1), (0, 1)]), Level.U)


def swap_nodes(coords, a, b):
    perm = list(range(coords.dim))
    perm[0], perm[1] = 1, 0
    exps = [F(0)] * coords.dim
    exps[0], exps[1] = F(a), F(b)
    return MonomialAction(coords, tuple(perm), tuple(exps))


def nonzero(exps):
    return sorted(x for x in exps if x)


def test_eigen_exponent_examples():
    c = tail_coords()
    assert nonzero(eigen_exponents(MonomialAction.diagonal(c, {0: F(2, 3)}))) == [F(2, 3)]
    p = pair_coords()
    assert nonzero(eigen_exponents(swap_nodes(p, F(1, 3), F(2, 3)))) == [F(1, 2)]
    assert nonzero(eigen_exponents(swap_nodes(p, F(1, 4), F(1, 4)))) == [F(1, 4), F(3, 4)]
    assert len(eigen_exponents(swap_nodes(p, 0, 0))) == p.dim


def test_rst_sum_examples():
    exps = [F(2, 3), F(2, 3)] + [F(0)] * 7
    assert rst_sum(exps, 3, 2) == F(2, 3)
    assert rst_sum(exps, 3, 1) == F(4, 3)
    assert rst_sum([F(2, 5), 0], 5, 1) == F(2, 5)
    with pytest.raises(BadPrimitiveIndex):
        rst_sum(exps, 3, 3)
    with pytest.raises(BadPrimitiveIndex):
        rst_sum([F(1, 4)], 2, 1)


def test_rst_min_examples():
    c = tail_coords()
    r = rst_min(MonomialAction.diagonal(c, {1: F(2, 3), 2: F(2, 3)}))
    assert (r.min_sum, r.witness_k, r.order) == (F(2, 3), 2, 3)
    assert r.sums == {1: F(4, 3), 2: F(2, 3)}
    q = rst_min(MonomialAction.diagonal(c, {0: F(1, 2)}))
    assert q.min_sum == F(1, 2) and q.quasireflection
    assert rst_min(MonomialAction.diagonal(c, {0: F(1, 2), 1: F(1, 2)})).min_sum == 1
    with pytest.raises(TrivialElement):
        rst_min(MonomialAction.identity(c))


def test_canonical_oracle_examples():
    c = tail_coords()
    assert canonical_oracle([MonomialAction.identity(c)]) == (True, None)
    ok, rep = canonical_oracle(group_closure([MonomialAction.diagonal(c, {1: F(2, 3), 2: F(2, 3)})]))
    assert not ok and rep.min_sum == F(2, 3)
    assert canonical_oracle(group_closure([MonomialAction.diagonal(c, {0: F(1, 2), 1: F(1, 2)})]))[0]
    with pytest.raises(QuasireflectionPresent):
        canonical_oracle(group_closure([MonomialAction.diagonal(c, {0: F(1, 2)})]))


def test_smoothness_examples():
    g = graph_from_genera([1, 3], [(0, 1)])
    s = make_support(g, {0})
    assert smoothness_criterion(s, [(eta_datum(g, 0, 2), True)])
    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)])
    assert not smoothness_criterion(make_support(pair, {0, 1}), [])
    jz = graph_from_genera([1, 3], [(0, 1)], j_classes={0: "JZero"})
    assert not smoothness_criterion(make_support(jz, {0}), [(eta_datum(jz, 0, 3), False)])


def test_low_genus_is_rejected():
    g = graph_from_genera([1, 2], [(0, 1)])
    s = make_support(g, {0})
    assert genus(g) == 3
    with pytest.raises(GenusTooSmall):
        smoothness_criterion(s, [])
    with pytest.raises(GenusTooSmall):
        classify_stratum(s, make_labels(s))
    with pytest.raises(GenusTooSmall):
        pi_sing_image_test(g, [])


def test_eta2_flag_must_match_structure():
    from spinsing.errors import IncompatibleDatum

    g = graph_from_genera([1, 3], [(0, 1)])
    s = make_support(g, {0})
    with pytest.raises(IncompatibleDatum):
        smoothness_criterion(s, [(eta_datum(g, 0, 2), False)])


def test_classification_examples():
    jz = graph_from_genera([1, 3], [(0, 1)], j_classes={0: "JZero"})
    s = make_support(jz, {0})
    c = classify_stratum(s, make_labels(s, {0: True}))
    assert c.verdict is Verdict.NON_CANONICAL and c.tail_witness == 0
    with pytest.raises(MissingThetaFlag):
        classify_stratum(s, make_labels(s))
    assert classify_stratum(s, make_labels(s, {0: False})).verdict is Verdict.SMOOTH

    gen = graph_from_genera([1, 3], [(0, 1)])
    s = make_support(gen, {0})
    c = classify_stratum(s, make_labels(s), [(eta_datum(gen, 0, 2), True)])
    assert c.verdict is Verdict.SMOOTH

    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)])
    s = make_support(pair, {0, 1})
    c = classify_stratum(s, make_labels(s))
    assert c.verdict is Verdict.CANONICAL and not c.tree_like
    assert c.reasons == {"tree_like": False}


@pytest.mark.parametrize("e", CATALOG, ids=[e.name for e in CATALOG])
def test_non_canonical_verdicts_carry_a_tail_witness(e):
    data = lifted_data(e.support, e.labels, e.generators)
    from spinsing.automorphism import is_eta2

    c = classify_stratum(e.support, e.labels, [(d, is_eta2(d)) for d in data])
    if c.verdict is Verdict.NON_CANONICAL:
        v = c.tail_witness
        vert = e.graph.vertex(v)
        assert v in elliptic_tails(e.graph) and vert.genus == 1
        assert vert.decoration.j_class.value == "JZero" and e.labels.flag(v)


def test_reduce_smooths_fixed_non_exceptional_nodes():
    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)])
    s = make_support(pair, set())
    s2, a2 = singularity_reduce(s, lift_action(s, identity_datum(pair)))
    assert len(s2.graph.vertices) == 1 and not s2.graph.edges
    assert a2.is_identity and a2.coords.dim == 9


def test_reduce_keeps_negated_exceptional_nodes():
    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)])
    s = make_support(pair, {0, 1})
    a = inessential_action(s, {0: 1})
    s2, a2 = singularity_reduce(s, a)
    assert s2 == s and a2 == a


def test_reduce_smooths_swapped_pair_with_trivial_product():
    e = entry("parallel_pair_swapped_nonexceptional")
    d, _ = e.generators[0]
    a = lift_action(e.support, d)
    s2, a2 = singularity_reduce(e.support, a)
    assert not s2.graph.edges
    assert nonzero(eigen_exponents(a2)) == nonzero(eigen_exponents(a))


def test_reduce_rejects_foreign_actions():
    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)])
    s = make_support(pair, {0, 1})
    with pytest.raises(NotFromSpinDatum):
        singularity_reduce(s, MonomialAction.identity(CoordinateSystem.for_support(s, Level.U)))
    other = make_support(pair, set())
    with pytest.raises(NotFromSpinDatum):
        singularity_reduce(s, lift_action(other, identity_datum(pair)))


def test_image_of_singular_locus_examples():
    # a smooth genus-4 component has no decoration carrying a nontrivial type, so
    # the non-ETA generator is the hyperelliptic involution on a tree
    hyp = graph_from_genera([2, 3], [(0, 1)], tags={0: ["HyperellipticG2"]})
    inv = make_datum(hyp, component_type={0: "HyperellipticG2"})
    assert pi_sing_image_test(hyp, [(inv, False)])
    pair = graph_from_genera([1, 2], [(0, 1), (0, 1)])
    assert pi_sing_image_test(pair, [])
    tail = graph_from_genera([1, 3], [(0, 1)])
    assert not pi_sing_image_test(tail, [(eta_datum(tail, 0, 2), True)])


def test_weight_examples():
    assert component_weight("Elliptic(3)", 1) == F(1, 3)
    assert component_weight("Elliptic(4)", 2) == F(3, 4)
    assert component_weight("Identity", 7) == 0
    with pytest.raises(NotInTable):
        component_weight("HyperellipticG2", 2)
    with pytest.raises(NotInTable):
        component_weight("Elliptic(6)", 2)
    assert len(WEIGHT_TABLE_ROWS) == 9


def test_block_contribution():
    assert block_contribution([F(2, 3)]) == F(1, 3)
    assert block_contribution([F(1, 2), F(1, 4)]) == F(3, 4)
    assert block_contribution([0, 0]) == 0


@given(st.integers(2, 24).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_quasireflection_sum_is_strictly_between_zero_and_one(na):
    n, a = na
    r = rst_min(MonomialAction.diagonal(tail_coords(), {0: F(a, n)}))
    assert r.quasireflection and 0 < r.min_sum < 1


@given(st.lists(st.sampled_from([1, 2, 3, 4, 6, 8, 12]).flatmap(lambda n: st.integers(0, n - 1).map(lambda a: F(a, n))), min_size=9, max_size=9))
def test_rst_min_matches_definition(exps):
    c = tail_coords()
    a = MonomialAction.diagonal(c, dict(enumerate(exps)))
    if a.is_identity:
        return
    r = rst_min(a)
    assert r.min_sum == rst_by_definition(exps, r.order)
    assert r.min_sum == min(r.sums.values()) == r.sums[r.witness_k]
    assert r.witness_k == min(k for k, v in r.sums.items() if v == r.min_sum)
