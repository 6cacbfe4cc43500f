import pytest

from scfab.geometry import (
    PLAQUETTE,
    STAR,
    adjacent_checks,
    build_layout,
)


def symplectic_overlap(a, b):
    return len(set(a) & set(b))


@pytest.mark.parametrize("L,data,checks", [(2, 5, 2), (3, 13, 6), (5, 41, 20)])
def test_counts(L, data, checks):
    lay = build_layout(L)
    assert len(lay.data_qubits) == data
    assert len(lay.stars()) == checks
    assert len(lay.plaquettes()) == checks


def test_invalid_distance():
    with pytest.raises(ValueError):
        build_layout(1)
    with pytest.raises(ValueError):
        build_layout(0)


def test_deterministic():
    a, b = build_layout(4), build_layout(4)
    assert [c.site for c in a.checks] == [c.site for c in b.checks]
    assert a.logical_z == b.logical_z
    assert a.qubit_index == b.qubit_index


@pytest.mark.parametrize("L", range(2, 16))
def test_structure_invariants(L):
    lay = build_layout(L)
    assert len(lay.data_qubits) == L * L + (L - 1) * (L - 1)
    assert len(lay.stars()) == L * (L - 1)
    assert len(lay.plaquettes()) == L * (L - 1)

    for ch in lay.checks:
        assert 2 <= ch.weight <= 4
        dirs = [d for d, _ in ch.support]
        assert len(set(dirs)) == len(dirs)
        for d, q in ch.support:
            assert q in lay.data_qubits
            dr = abs(q[0] - ch.site[0]) + abs(q[1] - ch.site[1])
            assert dr == 1

    # pairwise commutation: star/plaquette supports intersect evenly
    stars = lay.stars()
    plaqs = lay.plaquettes()
    for s in stars:
        for p in plaqs:
            assert symplectic_overlap(s.support_sites, p.support_sites) % 2 == 0

    assert len(lay.logical_z) == L
    assert len(lay.logical_x) == L
    assert len(set(lay.logical_z) & set(lay.logical_x)) == 1

    # logical commutation relations
    for s in stars:
        assert symplectic_overlap(lay.logical_z, s.support_sites) % 2 == 0
    for p in plaqs:
        assert symplectic_overlap(lay.logical_x, p.support_sites) % 2 == 0

    # membership bounds
    for q in lay.data_qubits:
        n_star = len(adjacent_checks(lay, q, STAR))
        n_plaq = len(adjacent_checks(lay, q, PLAQUETTE))
        assert 1 <= n_star <= 2
        assert 1 <= n_plaq <= 2


def test_adjacent_checks_examples():
    lay = build_layout(3)
    stars = adjacent_checks(lay, (0, 0), STAR)
    assert [c.site for c in stars] == [(1, 0)]
    plaqs = adjacent_checks(lay, (2, 2), PLAQUETTE)
    assert [c.site for c in plaqs] == [(2, 1), (2, 3)]
    plaqs = adjacent_checks(lay, (2, 0), PLAQUETTE)
    assert [c.site for c in plaqs] == [(2, 1)]


def test_adjacent_checks_rejects_non_data():
    lay = build_layout(3)
    with pytest.raises(ValueError):
        adjacent_checks(lay, (1, 0), STAR)
    with pytest.raises(ValueError):
        adjacent_checks(lay, (0, 0), "vertex")


def test_boundary_weights():
    lay = build_layout(5)
    weights = sorted(c.weight for c in lay.stars())
    assert weights.count(3) == 8
    assert weights.count(4) == 12
