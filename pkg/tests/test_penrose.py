"""Tests for the E/F tensor calculus and the Rho–Ricci linear algebra.

Frozen values were computed by hand from the index conventions:

* On the (2, 3) grading the quotient basis is X^0..X^5 at matrix positions
  (2,0), (2,1), (3,0), (3,1), (4,0), (4,1); X^i carries E-index b and
  F-index a − 2.  For κ(X^0, X^1) = E_03 + E_31 + E_01 + E_24 the four
  blocks each receive one entry with argument head (0,0,1,0) (and its skew
  partner): Y[(…,0,1)] from E_03, τ[(…,1,1)] from E_31, W[(…,0,1)] from
  E_01, W′[(…,0,2)] from E_24.
* The Ricci map P ↦ (n+2)P − P^A_{B'}{}^B_{A'} − P^B_{A'}{}^A_{B'} acts on
  the four symmetry types by n, n+4, n+2, n+2; a purely (AB)(A'B')-type
  tensor of value 3 at n = 3 maps to value 9 = 3·3, and a purely
  [AB][A'B']-type tensor of value 7 maps to value 49 = 7·7.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from kostantcheck.gla import graded_sl
from kostantcheck.kostant import Cochain, hodge, partial
from kostantcheck.penrose import (
    TAU_SIG,
    TRACE_SIG,
    W_SIG,
    WP_SIG,
    Y_SIG,
    EFTensor,
    check_harmonic_torsion_type,
    extract_blocks,
    reassemble,
    rho_cochain,
    rho_from_ric,
    ric_from_rho,
    sym_split,
    tr_W,
    tr_Wp,
    tr_itau_tau,
    weyl_from_curvature,
    weyl_identity_residuals,
    zero_tensor,
)

F = Fraction


def random_tensor(sig, n: int, rng: random.Random) -> EFTensor:
    t = EFTensor(sig, n)
    for idx in itertools.product(*[range(t.slot_dim(k)) for k in range(len(sig))]):
        t.add_entry(idx, rng.randint(-9, 9))
    return t


def random_cochain(alg, rng: random.Random, terms: int = 8) -> Cochain:
    c = Cochain(alg, 2)
    for _ in range(terms):
        T = tuple(rng.sample(range(alg.dim_neg), 2))
        c.add_term(T, alg.basis_mat(rng.randrange(alg.dim)), F(rng.randint(-3, 3)))
    return c


class TestEFTensor:
    def test_slot_dimensions_and_bounds(self) -> None:
        t = EFTensor(("E", "F*"), 3)
        assert t.slot_dim(0) == 2 and t.slot_dim(1) == 3
        with pytest.raises(ValueError):
            t.add_entry((2, 0), 1)
        with pytest.raises(ValueError):
            t.add_entry((0, 3), 1)

    def test_contraction_requires_dual_pair(self) -> None:
        t = EFTensor(("E", "E*", "F"), 2)
        t.add_entry((0, 0, 1), 5)
        assert t.contract(0, 1).data == {(1,): F(5)}
        with pytest.raises(ValueError):
            t.contract(0, 2)

    def test_swap_requires_same_type(self) -> None:
        t = EFTensor(("E", "E", "F*"), 2)
        t.add_entry((0, 1, 0), 2)
        assert t.swap(0, 1).data == {(1, 0, 0): F(2)}
        with pytest.raises(ValueError):
            t.swap(0, 2)

    def test_entries_cancel_exactly(self) -> None:
        t = EFTensor(("F",), 4)
        t.add_entry((2,), F(1, 3))
        t.add_entry((2,), F(-1, 3))
        assert t.is_zero()


class TestBlockExtraction:
    def test_zero_gives_zero_blocks(self) -> None:
        alg = graded_sl((2, 3))
        blocks = extract_blocks(Cochain(alg, 2))
        assert blocks.tau.is_zero() and blocks.W.is_zero()
        assert blocks.Wp.is_zero() and blocks.Y.is_zero()

    def test_frozen_single_term_blocks(self) -> None:
        alg = graded_sl((2, 3))
        value = {(0, 3): F(1), (3, 1): F(1), (0, 1): F(1), (2, 4): F(1)}
        blocks = extract_blocks(Cochain(alg, 2, {(0, 1): value}))
        assert blocks.Y.data == {(0, 0, 1, 0, 0, 1): F(1), (1, 0, 0, 0, 0, 1): F(-1)}
        assert blocks.tau.data == {(0, 0, 1, 0, 1, 1): F(1), (1, 0, 0, 0, 1, 1): F(-1)}
        assert blocks.W.data == {(0, 0, 1, 0, 0, 1): F(1), (1, 0, 0, 0, 0, 1): F(-1)}
        assert blocks.Wp.data == {(0, 0, 1, 0, 0, 2): F(1), (1, 0, 0, 0, 0, 2): F(-1)}

    @pytest.mark.parametrize("n", [3, 4])
    def test_round_trip_is_identity(self, n: int) -> None:
        alg = graded_sl((2, n))
        rng = random.Random(n)
        for _ in range(5):
            c = random_cochain(alg, rng)
            assert reassemble(extract_blocks(c), alg) == c

    def test_rejects_other_gradings(self) -> None:
        with pytest.raises(ValueError):
            extract_blocks(Cochain(graded_sl((1, 1, 3)), 2))


class TestTraceContractions:
    def test_tr_w_matches_displayed_loop(self) -> None:
        rng = random.Random(11)
        n = 3
        w = random_tensor(W_SIG, n, rng)
        expected = EFTensor(TRACE_SIG, n)
        for a, ap, b, bp in itertools.product(range(2), range(n), range(2), range(n)):
            total = sum((w.get((a, ap, i, bp, b, i)) for i in range(2)), F(0))
            expected.add_entry((a, ap, b, bp), total)
        assert tr_W(w) == expected

    def test_tr_wp_matches_displayed_loop(self) -> None:
        rng = random.Random(12)
        n = 3
        wp = random_tensor(WP_SIG, n, rng)
        expected = EFTensor(TRACE_SIG, n)
        for a, ap, b, bp in itertools.product(range(2), range(n), range(2), range(n)):
            total = sum((wp.get((a, ap, b, ip, ip, bp)) for ip in range(n)), F(0))
            expected.add_entry((a, ap, b, bp), total)
        assert tr_Wp(wp) == expected

    def test_tr_itau_tau_matches_displayed_loop(self) -> None:
        rng = random.Random(13)
        n = 3
        tau = random_tensor(TAU_SIG, n, rng)
        expected = EFTensor(TRACE_SIG, n)
        for a, ap, b, bp in itertools.product(range(2), range(n), range(2), range(n)):
            total = F(0)
            for i, ip, j, jp in itertools.product(range(2), range(n),
                                                  range(2), range(n)):
                total += tau.get((i, ip, a, ap, jp, j)) * tau.get((j, jp, b, bp, ip, i))
            expected.add_entry((a, ap, b, bp), total)
        assert tr_itau_tau(tau) == expected

    def test_double_contraction_is_symmetric(self) -> None:
        """Relabelling the summation pair shows tr(i_τ τ) is symmetric under
        the simultaneous E- and F-slot swap, for every τ."""
        rng = random.Random(14)
        tau = random_tensor(TAU_SIG, 3, rng)
        out = tr_itau_tau(tau)
        assert out == out.swap(0, 2).swap(1, 3)


class TestSymSplit:
    def test_components_sum_to_input(self) -> None:
        rng = random.Random(21)
        t = random_tensor(TRACE_SIG, 3, rng)
        assert sym_split(t).total() == t

    def test_projections_idempotent(self) -> None:
        rng = random.Random(22)
        parts = sym_split(random_tensor(TRACE_SIG, 3, rng))
        for name in ("sym_sym", "skew_skew", "sym_skew", "skew_sym"):
            comp = getattr(parts, name)
            again = sym_split(comp)
            assert getattr(again, name) == comp
            for other in ("sym_sym", "skew_skew", "sym_skew", "skew_sym"):
                if other != name:
                    assert getattr(again, other).is_zero()

    def test_symmetric_input_is_pure(self) -> None:
        t = EFTensor(TRACE_SIG, 3)
        t.add_entry((0, 0, 0, 0), 4)
        parts = sym_split(t)
        assert parts.sym_sym == t
        assert parts.skew_skew.is_zero()
        assert parts.sym_skew.is_zero() and parts.skew_sym.is_zero()


class TestRhoRicci:
    def test_pure_symmetric_type_scales_by_n(self) -> None:
        ric = EFTensor(TRACE_SIG, 3)
        ric.add_entry((0, 0, 0, 0), 3)
        assert rho_from_ric(ric, 3) == ric.scale(F(1, 3))
        assert ric_from_rho(ric, 3) == ric.scale(3)

    def test_pure_skew_type_scales_by_n_plus_four(self) -> None:
        ric = EFTensor(TRACE_SIG, 3)
        for (a, ap, b, bp), sign in (((0, 0, 1, 1), 1), ((1, 0, 0, 1), -1),
                                     ((0, 1, 1, 0), -1), ((1, 1, 0, 0), 1)):
            ric.add_entry((a, ap, b, bp), 7 * sign)
        p = rho_from_ric(ric, 3)
        assert p == ric.scale(F(1, 7))
        assert p.get((0, 0, 1, 1)) == F(1)

    @pytest.mark.parametrize("n", [3, 4])
    def test_eigen_scalars(self, n: int) -> None:
        rng = random.Random(n + 30)
        parts = sym_split(random_tensor(TRACE_SIG, n, rng))
        for comp, scalar in ((parts.sym_sym, n), (parts.skew_skew, n + 4),
                             (parts.sym_skew, n + 2), (parts.skew_sym, n + 2)):
            assert ric_from_rho(comp, n) == comp.scale(scalar)

    @pytest.mark.parametrize("n", [3, 4])
    def test_round_trips(self, n: int) -> None:
        rng = random.Random(n + 40)
        for _ in range(3):
            p = random_tensor(TRACE_SIG, n, rng)
            assert rho_from_ric(ric_from_rho(p, n), n) == p
            ric = random_tensor(TRACE_SIG, n, rng)
            assert ric_from_rho(rho_from_ric(ric, n), n) == ric


class TestWeylExpansion:
    def test_zero_rho_is_identity(self) -> None:
        rng = random.Random(51)
        n = 3
        r_e = random_tensor(W_SIG, n, rng)
        r_f = random_tensor(WP_SIG, n, rng)
        w, wp = weyl_from_curvature(r_e, r_f, zero_tensor(TRACE_SIG, n))
        assert w == r_e and wp == r_f

    @pytest.mark.parametrize("n", [3, 4])
    def test_rho_terms_equal_partial_of_rho_cochain(self, n: int) -> None:
        rng = random.Random(n + 50)
        alg = graded_sl((2, n))
        for _ in range(3):
            p = random_tensor(TRACE_SIG, n, rng)
            w, wp = weyl_from_curvature(zero_tensor(W_SIG, n),
                                        zero_tensor(WP_SIG, n), p)
            blocks = extract_blocks(partial(rho_cochain(p, alg)))
            assert blocks.tau.is_zero() and blocks.Y.is_zero()
            assert blocks.W == w and blocks.Wp == wp

    @pytest.mark.parametrize("n", [3, 4])
    def test_trace_corrections(self, n: int) -> None:
        """tr and tr' of the P-part give 2P − P^A_{B'}{}^B_{A'} and
        −nP + P^B_{A'}{}^A_{B'}."""
        rng = random.Random(n + 60)
        p = random_tensor(TRACE_SIG, n, rng)
        w, wp = weyl_from_curvature(zero_tensor(W_SIG, n),
                                    zero_tensor(WP_SIG, n), p)
        assert tr_W(w) == p.scale(2).sub(p.swap(1, 3))
        assert tr_Wp(wp) == p.scale(-n).add(p.swap(0, 2))

    def test_rho_cochain_frozen_entry(self) -> None:
        alg = graded_sl((2, 3))
        p = EFTensor(TRACE_SIG, 3)
        p.add_entry((0, 0, 1, 2), 5)
        c = rho_cochain(p, alg)
        assert c.data == {(alg.index_of_neg[(2, 0)],): {(1, 4): F(5)}}


class TestIdentityChecker:
    def test_residuals_are_the_displayed_differences(self) -> None:
        """Checker semantics: each residual equals the literal difference of
        the two sides it names, for arbitrary inputs."""
        rng = random.Random(71)
        n = 3
        w = random_tensor(W_SIG, n, rng)
        wp = random_tensor(WP_SIG, n, rng)
        tau = random_tensor(TAU_SIG, n, rng)
        res = weyl_identity_residuals(w, wp, tau, n)
        trw, tritt = tr_W(w), tr_itau_tau(tau)
        s_w, s_t = sym_split(trw), sym_split(tritt)
        assert set(res) == {"trW_minus_trWp", "sym_sym", "skew_skew",
                            "sym_skew_itau", "sym_skew_trW",
                            "skew_sym_itau", "skew_sym_trW"}
        assert res["trW_minus_trWp"] == trw.sub(tr_Wp(wp))
        assert res["sym_sym"] == s_t.sym_sym.sub(s_w.sym_sym.scale(n))
        assert res["skew_skew"] == s_t.skew_skew.sub(s_w.skew_skew.scale(n + 4))
        assert res["sym_skew_itau"] == s_t.sym_skew
        assert res["sym_skew_trW"] == s_w.sym_skew
        assert res["skew_sym_itau"] == s_t.skew_sym
        assert res["skew_sym_trW"] == s_w.skew_sym

    def test_zero_input_has_zero_residuals(self) -> None:
        n = 3
        res = weyl_identity_residuals(zero_tensor(W_SIG, n),
                                      zero_tensor(WP_SIG, n),
                                      zero_tensor(TAU_SIG, n), n)
        assert all(t.is_zero() for t in res.values())


class TestHarmonicTyping:
    @pytest.mark.parametrize("n,harmonic_dim,tau_dim,rho_dim",
                             [(3, 48, 24, 24), (4, 150, 80, 70)])
    def test_frozen_dimensions(self, n, harmonic_dim, tau_dim, rho_dim) -> None:
        data = check_harmonic_torsion_type(n)
        assert data["ok"], data["failures"]
        assert data["harmonic_dim"] == harmonic_dim
        assert data["tau_dim"] == tau_dim
        assert data["rho_dim"] == rho_dim

    @pytest.mark.parametrize("n", [3, 4])
    def test_tau_dimension_matches_tensor_count(self, n: int) -> None:
        """dim of (Sym²E⊗E*)_o ⊗ (Λ²F*⊗F)_o is 4·(n·C(n,2) − n)."""
        data = check_harmonic_torsion_type(n)
        assert data["tau_dim"] == 4 * (n * (n * (n - 1) // 2) - n)

    def test_harmonic_tau_vanishes_under_all_contractions(self) -> None:
        harm = hodge((2, 3), 2).ker_box
        for c in harm.basis_cochains():
            tau = extract_blocks(c).tau
            for upper, lower in ((0, 5), (2, 5), (4, 1), (4, 3)):
                assert tau.contract(upper, lower).is_zero()
