import json

import numpy as np
import pytest

from fanostrata import core
from fanostrata.errors import ConsistencyError, DomainError
from fanostrata.experiment import (FermatReport, _mults_to_type, _run_shard,
                                   fermat_constants, fermat_suite,
                                   find_fermat_prime, sample_types)
from fanostrata.strata import SplittingType


class TestKernelParity:
    @pytest.mark.parametrize("n,d,p", [(4, 3, 101), (5, 5, 101), (6, 7, 1009)])
    def test_backends_identical(self, n, d, p):
        rng = np.random.default_rng(99)
        coeffs = rng.integers(0, p, size=(400, (n - 1) * d), dtype=np.int64)
        outs = [mod.batch_multiplicities(coeffs, n, d, p)
                for _, mod in core.backends()]
        for out in outs[1:]:
            assert (out == outs[0]).all()

    def test_invalid_rows_marked(self):
        # tuple with a shared factor x0: marked invalid by both backends
        n, d, p = 4, 3, 101
        row = np.array([[0, 1, 0, 0, 0, 1, 0, 1, 1]], dtype=np.int64)
        for _, mod in core.backends():
            out = mod.batch_multiplicities(row, n, d, p)
            assert out[0, 0] == -1


class TestSampling:
    def test_reproducible_byte_for_byte(self):
        a = sample_types(4, 3, 101, 3000, seed=5)
        b = sample_types(4, 3, 101, 3000, seed=5)
        assert json.dumps(a.to_json(), sort_keys=True) == \
            json.dumps(b.to_json(), sort_keys=True)

    def test_counts_sum_to_trials(self):
        rep = sample_types(5, 5, 101, 2000, seed=9)
        assert sum(rep.counts.values()) == 2000
        for t in rep.counts:
            assert isinstance(t, SplittingType)

    def test_sharding_merge_equals_parallel(self):
        rep = sample_types(4, 3, 101, 10000, seed=7, workers=3)
        counts, rejected = {}, 0
        chunks = [3334, 3333, 3333]
        for idx, chunk in enumerate(chunks):
            c, r = _run_shard((4, 3, 101, chunk, 7, idx))
            rejected += r
            for key, v in c.items():
                counts[key] = counts.get(key, 0) + v
        typed = {_mults_to_type(k, 4, 3): v for k, v in counts.items()}
        assert typed == rep.counts and rejected == rep.rejected

    def test_balanced_dominates_as_p_grows(self):
        for p in (31, 101, 307):
            rep = sample_types(4, 3, p, 4000, seed=1)
            balanced = SplittingType((0, 0), 4, 3)
            assert rep.frequency(balanced) >= 1 - 5 / p

    def test_unbalanced_frequency_window(self):
        p = 101
        rep = sample_types(4, 3, p, 200000, seed=1)
        freq = rep.frequency(SplittingType((-1, 1), 4, 3))
        assert 0.5 / p <= freq <= 2 / p

    def test_codim_estimate(self):
        p = 101
        rep = sample_types(4, 3, p, 200000, seed=1)
        est, lo, hi = rep.codim_estimate(SplittingType((-1, 1), 4, 3))
        assert lo <= est <= hi
        assert 0.8 <= est <= 1.2

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            sample_types(4, 3, 100, 10, seed=0)      # composite
        with pytest.raises(DomainError):
            sample_types(4, 5, 5, 10, seed=0)        # p <= d
        with pytest.raises(DomainError):
            sample_types(4, 3, 101, 0, seed=0)       # no trials
        with pytest.raises(DomainError):
            sample_types(4, 3, 101, 10, seed=0, workers=0)

    def test_csv(self):
        rep = sample_types(4, 3, 101, 1000, seed=2)
        text = rep.to_csv()
        assert text.splitlines()[0] == "type,count"
        assert '"(0,0)"' in text


class TestFermatSuite:
    def test_quartic_threefold_41(self):
        rep = fermat_suite(4, 4, 41)
        assert rep.zeta == 3
        assert len(rep.pairs) == 8
        assert all(ln.splitting.entries == (-2, 1) for ln in rep.lines)
        # only axis pairs exist over this prime, so the stratum tangent
        # space always fills the Fano one
        assert all(not (ln.a and ln.b) for ln in rep.lines)
        assert all(ln.dim_TFa == ln.dim_TF == 2 for ln in rep.lines)

    def test_quartic_threefold_73_dichotomy(self):
        rep = fermat_suite(4, 4, 73)
        generic = [ln for ln in rep.lines if ln.a and ln.b]
        axis = [ln for ln in rep.lines if not (ln.a and ln.b)]
        assert generic and axis
        assert all(ln.dim_TFa == 1 for ln in generic)
        assert all(ln.dim_TFa == 2 for ln in axis)

    @pytest.mark.parametrize("n", [5, 6])
    def test_quintic_cone_lines(self, n):
        rep = fermat_suite(n, 5)
        assert rep.expected_type.entries == (-3,) + (1,) * (n - 3)
        assert all(ln.splitting == rep.expected_type for ln in rep.lines)
        assert all(ln.dim_TF >= 2 * n - 6 for ln in rep.lines)

    def test_prime_search(self):
        assert find_fermat_prime(5) == 17
        p = find_fermat_prime(4)
        zeta, pairs = fermat_constants(4, p)
        assert pow(zeta, 4, p) == p - 1
        assert all((pow(a, 4, p) + pow(b, 4, p) + 1) % p == 0 for a, b in pairs)

    def test_missing_roots_reported(self):
        # 19 != 1 mod 8, so no fourth root of -1
        with pytest.raises(DomainError):
            fermat_suite(4, 4, 19)

    def test_json(self):
        rep = fermat_suite(4, 4, 41)
        payload = rep.to_json()
        assert payload["p"] == 41 and len(payload["lines"]) == 8
