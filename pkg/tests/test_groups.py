import pytest
from hypothesis import given, strategies as st

from gammagraph.errors import GroupError
from gammagraph.groups import (GroupSpec, add, cyclic_subgroup, element_order, has_involution, make_group,
                               neg, prime_power, quotient_map, total, zero)


def test_make_group_orders():
    assert make_group([]).order == 1
    assert make_group([4]).order == 4
    assert make_group([2, 3]).order == 6


def test_rejects_bad_moduli():
    with pytest.raises(GroupError):
        make_group([0])


def test_arithmetic_examples():
    z5 = make_group([5])
    assert add(z5.elem(3), z5.elem(4)) == z5.elem(2)
    g = make_group([2, 3])
    assert neg(g.elem((1, 2))) == g.elem((1, 1))


def test_element_order_examples():
    assert element_order(make_group([4]).elem(2)) == 2
    assert element_order(make_group([5]).elem(1)) == 5
    assert element_order(make_group([2, 3]).elem((1, 0))) == 2


def test_involutions():
    assert not has_involution(make_group([3]))
    assert has_involution(make_group([6]))
    assert make_group([6]).involutions() == [make_group([6]).elem(3)]
    assert not has_involution(make_group([]))


def test_cyclic_subgroup():
    z9 = make_group([9])
    assert cyclic_subgroup(z9.elem(3)) == {z9.elem(0), z9.elem(3), z9.elem(6)}
    assert cyclic_subgroup(z9.elem(0)) == {z9.zero}


def test_quotient_map():
    spec, proj = quotient_map(make_group([9]), 3)
    assert spec.moduli == (3,)
    assert proj(make_group([9]).elem(4)) == spec.elem(1)
    spec3, proj3 = quotient_map(make_group([3]), 3)
    assert spec3.order == 3 and proj3(make_group([3]).elem(2)) == spec3.elem(2)
    z27 = make_group([27])
    kernel = [x for x in z27.elements() if proj_zero(z27, x)]
    assert len(kernel) == 9
    with pytest.raises(GroupError):
        quotient_map(make_group([6]), 2)


def proj_zero(spec, x):
    _, p = quotient_map(spec, 3)
    return p(x).is_zero


def test_prime_power():
    assert prime_power(27) == (3, 3)
    assert prime_power(5) == (5, 1)
    assert prime_power(12) is None


def test_json_roundtrip():
    g = make_group([2, 4])
    assert GroupSpec.from_json(g.to_json()) == g


groups = st.sampled_from([make_group(m) for m in ([2], [3], [4], [2, 2], [6], [2, 3], [12], [3, 3])])


@given(groups, st.data())
def test_group_axioms(G, data):
    elems = list(G.elements())
    a, b, c = (data.draw(st.sampled_from(elems)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + zero(G) == a
    assert a + (-a) == G.zero
    assert total(G, [a, b, c]) == a + b + c
    assert (a * element_order(a)).is_zero
    assert all(not (a * k).is_zero for k in range(1, element_order(a)))
