import math

import numpy as np
import pytest

from gcslab import (ConvergenceError, DomainError, Ensemble, GCSParams,
                    auto_cutoff, coherent_state, fock_basis_state,
                    fock_negativity, make_gcs, negativity, negativity_batch,
                    normalized_negativity)
from gcslab.wigner import _upsample

FOCK1_EXACT = 4.0 * math.exp(-0.5) - 2.0   # closed-form radial integral


def radial_fock_negativity(n):
    """Independent oracle: adaptive radial quadrature of the |n> integrand."""
    from scipy import integrate
    from scipy.special import eval_laguerre, roots_laguerre
    sign = (-1.0) ** n

    def f(r):
        w = (2.0 / math.pi) * sign * math.exp(-2.0 * r * r) * eval_laguerre(n, 4.0 * r * r)
        return (abs(w) - w) * 2.0 * math.pi * r

    breaks = list(np.sqrt(roots_laguerre(n)[0]) / 2.0)
    val, err = integrate.quad(f, 0.0, 14.0, points=breaks, limit=300)
    assert err < 1e-10
    return val


class TestCalibration:
    def test_fock1_closed_form(self):
        v = negativity(fock_basis_state(1), 1e-4)
        assert v == pytest.approx(FOCK1_EXACT, rel=1e-4)

    def test_fock1_matches_radial_oracle(self):
        assert radial_fock_negativity(1) == pytest.approx(FOCK1_EXACT, rel=1e-10)

    def test_fock10_matches_radial_oracle(self):
        # frozen oracle value 2.152523130008886
        ref = radial_fock_negativity(10)
        assert ref == pytest.approx(2.152523130008886, rel=1e-10)
        assert fock_negativity(10, 1e-4) == pytest.approx(ref, rel=5e-4)

    def test_fock_negativity_trivials(self):
        assert fock_negativity(0, 1e-3) == 0.0
        assert fock_negativity(1, 1e-3) == pytest.approx(FOCK1_EXACT, rel=1e-3)

    def test_refinement_stability(self):
        a = fock_negativity(10, 1e-3)
        b = fock_negativity(10, 1e-4)
        assert a == pytest.approx(b, rel=3e-3)


class TestNonnegativeSources:
    def test_coherent_zero(self):
        s = coherent_state(math.sqrt(10), auto_cutoff(10, 1e-12) + 15)
        assert negativity(s, 1e-3) < 1e-8

    @pytest.mark.parametrize("eps", [0.0, 1.0])
    def test_linear_evolutions_zero(self, eps):
        cutoff = auto_cutoff(10, 1e-12) + 15
        s = make_gcs(GCSParams(math.sqrt(10), eps, 1.3), cutoff)
        assert negativity(s, 1e-3) < 1e-8

    def test_vacuum(self):
        assert negativity(fock_basis_state(0), 1e-3) < 1e-12


class TestCatStates:
    def test_cat_negative(self):
        s = make_gcs(GCSParams(math.sqrt(10), 2.0, math.pi / 2), 48)
        v = negativity(s, 1e-3)
        assert v == pytest.approx(0.6349, rel=5e-3)

    def test_normalized_above_unity_exists(self):
        # multi-component cat near tau = pi/8 beats the Fock reference
        s = make_gcs(GCSParams(math.sqrt(10), 2.0, math.pi / 8), 48)
        assert normalized_negativity(s, 10.0, 1e-3) > 1.0


class TestNormalized:
    def test_self_normalization(self):
        assert normalized_negativity(fock_basis_state(10), 10.0, 1e-3) == pytest.approx(
            1.0, abs=1e-12)

    def test_coherent_zero(self):
        s = coherent_state(math.sqrt(10), auto_cutoff(10, 1e-12) + 15)
        assert normalized_negativity(s, 10.0, 1e-3) < 1e-8

    def test_rounding_ties_to_even(self):
        s = fock_basis_state(10)
        # 10.5 rounds to 10 (ties to even), so self-normalization still holds
        assert normalized_negativity(s, 10.5, 1e-3) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_tiny_nbar(self):
        with pytest.raises(DomainError):
            normalized_negativity(fock_basis_state(1), 0.2, 1e-3)
        with pytest.raises(DomainError):
            normalized_negativity(fock_basis_state(1), 0.0, 1e-3)


class TestLadderMachinery:
    def test_rel_tol_validation(self):
        with pytest.raises(DomainError):
            negativity(fock_basis_state(1), 0.5)
        with pytest.raises(DomainError):
            negativity(fock_basis_state(1), 0.0)

    def test_budget_exhaustion_carries_estimates(self):
        with pytest.raises(ConvergenceError) as err:
            negativity(make_gcs(GCSParams(math.sqrt(10), 2.0, math.pi / 2), 48), 1e-9)
        assert err.value.estimates is not None
        a, b = err.value.estimates
        assert math.isfinite(a) and math.isfinite(b)

    def test_batch_matches_single(self):
        states = [make_gcs(GCSParams(math.sqrt(10), 2.0, t), 48)
                  for t in (0.3, math.pi / 2)]
        batch = negativity_batch(states, 1e-3)
        for s, v in zip(states, batch):
            assert v == negativity(s, 1e-3)

    def test_batch_shares_ensemble_members(self):
        a = make_gcs(GCSParams(math.sqrt(10), 2.0, 0.5), 48)
        b = make_gcs(GCSParams(math.sqrt(10), 2.0, -0.5), 48)
        mixtures = [Ensemble(((w, a), (1.0 - w, b))) for w in (0.25, 0.5, 0.75)]
        vals = negativity_batch(mixtures, 1e-3)
        for ens, v in zip(mixtures, vals):
            assert v == negativity(ens, 1e-3)

    def test_upsample_reproduces_true_field(self):
        # the refinement ladder rests on this: trig upsampling of a
        # Nyquist-adequate sample equals re-evaluating the state
        from gcslab import wigner_field, PhaseGrid
        s = make_gcs(GCSParams(math.sqrt(10), 2.0, math.pi / 2), 48)
        L = 10.0
        coarse = wigner_field(s, PhaseGrid(L, 301, 301)).values
        fine = wigner_field(s, PhaseGrid(L, 601, 601)).values
        up = _upsample(np.asarray(coarse), 2)
        assert np.max(np.abs(up - fine)) < 1e-12


class TestEnsembleNegativity:
    def test_mixture_reduces_negativity(self):
        a = make_gcs(GCSParams(math.sqrt(10), 2.0, math.pi / 2), 48)
        b = make_gcs(GCSParams(math.sqrt(10), 2.0, -math.pi / 2), 48)
        pure = negativity(a, 1e-3)
        mixed = negativity(Ensemble(((0.5, a), (0.5, b))), 1e-3)
        assert 0.0 < mixed < pure

    def test_single_component_matches_pure(self):
        a = make_gcs(GCSParams(math.sqrt(10), 2.0, 0.7), 48)
        ens = Ensemble(((1.0, a),))
        assert negativity(ens, 1e-3) == negativity(a, 1e-3)
