import json
import re
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from bhlab import (
    BoundViolationError,
    CapExceededError,
    CoefficientTensor,
    DomainError,
    TensorDataError,
    bh_lower_real,
    bh_upper,
    certified_ratio,
    certify_ratio,
    hadamard_block_form,
    mixed_norm,
    search_extremal,
    sup_norm_ascent,
    sup_norm_exact_real_linf,
    sup_norm_upper_holder,
)
from bhlab.verifier import HARD_CAP, _sign_matrix, applicable_upper_bound, ascent_run, random_tensor
from oracles import brute_force_linf_norm, nested_norm_loops

T2 = np.array([[1.0, 1.0], [1.0, -1.0]])


class TestTensorIO:
    def test_roundtrip_real(self):
        t = random_tensor(3, 2, np.random.default_rng(0))
        back = CoefficientTensor.from_json(t.to_json())
        np.testing.assert_array_equal(back.entries, t.entries)

    def test_roundtrip_complex(self):
        t = random_tensor(2, 3, np.random.default_rng(1), "complex")
        doc = json.loads(t.to_json())
        assert doc["layout"] == "row-major" and len(doc["entries"][0]) == 2
        back = CoefficientTensor.from_dict(doc)
        np.testing.assert_array_equal(back.entries, t.entries)

    def test_row_major(self):
        doc = {"m": 2, "n": 2, "field": "real", "entries": [1, 2, 3, 4]}
        assert CoefficientTensor.from_dict(doc).entries[0, 1] == 2.0

    @pytest.mark.parametrize(
        "doc,msg",
        [
            ({"m": 2, "n": 2, "field": "real", "entries": [1, 2, 3]}, "expected n^m = 4 entries, got 3"),
            ({"m": 2, "n": 2, "entries": [1, 2, 3, 4]}, "missing keys"),
            ({"m": 2, "n": 2, "field": "real", "entries": [1, 2, 3, 4], "layout": "col-major"}, "layout"),
            ({"m": 2, "n": 2, "field": "octonion", "entries": [1, 2, 3, 4]}, "scalar field"),
            ({"m": 2, "n": 2, "field": "complex", "entries": [1, 2, 3, 4]}, "pairs"),
            ({"m": 0, "n": 2, "field": "real", "entries": []}, "positive"),
        ],
    )
    def test_bad_docs(self, doc, msg):
        with pytest.raises(TensorDataError, match=re.escape(msg)):
            CoefficientTensor.from_dict(doc)

    def test_bad_json(self):
        with pytest.raises(TensorDataError):
            CoefficientTensor.from_json("{not json")

    def test_shape_checks(self):
        with pytest.raises(TensorDataError):
            CoefficientTensor(np.zeros((2, 3)))
        with pytest.raises(TensorDataError):
            CoefficientTensor(np.array([[np.nan, 1.0], [1.0, 1.0]]))
        with pytest.raises(TensorDataError):
            CoefficientTensor(np.array([[1j, 1.0], [1.0, 1.0]]), "real")


class TestMixedNorm:
    def test_t2(self):
        t = CoefficientTensor(T2)
        assert mixed_norm(t, ["4/3", "4/3"]) == pytest.approx(2 ** 1.5, rel=1e-14)
        assert mixed_norm(t, [1, 1]) == 4.0
        assert mixed_norm(t, ["inf", "inf"]) == 1.0

    def test_order_matters(self):
        a = np.array([[1.0, 0.0], [1.0, 0.0]])
        t = CoefficientTensor(a)
        # innermost l_1 then outer l_inf: 1; innermost l_inf then outer l_1: 2
        assert mixed_norm(t, ["inf", 1]) == 1.0
        assert mixed_norm(t, [1, "inf"]) == 2.0

    @settings(max_examples=60, deadline=None)
    @given(
        arrays(float, (3, 3, 3), elements=st.floats(-10, 10)),
        st.lists(st.sampled_from([1.0, 4 / 3, 1.5, 2.0, 3.0, math.inf]), min_size=3, max_size=3),
    )
    def test_against_loops(self, a, q):
        if not np.any(a):
            return
        t = CoefficientTensor(a)
        assert mixed_norm(t, q) == pytest.approx(nested_norm_loops(a, q), rel=1e-12)

    def test_tiny_entries(self):
        t = CoefficientTensor(np.full((2, 2), 1e-200))
        assert mixed_norm(t, [1.5, 1.5]) == pytest.approx(1e-200 * 4 ** (1 / 1.5), rel=1e-12)

    def test_mismatch(self):
        with pytest.raises(TensorDataError, match="dimension mismatch"):
            mixed_norm(CoefficientTensor(T2), [1.5, 1.5, 1.5])
        with pytest.raises(DomainError):
            mixed_norm(CoefficientTensor(T2), [0.5, 2])


class TestExactNorm:
    def test_sign_matrix(self):
        s = _sign_matrix(3)
        assert s.shape == (4, 3) and np.all(s[:, 0] == 1)
        assert len({tuple(r) for r in s}) == 4

    def test_t2(self):
        assert sup_norm_exact_real_linf(CoefficientTensor(T2)).value == 2.0

    @pytest.mark.parametrize("m,n", [(2, 2), (2, 4), (3, 2), (3, 3), (4, 2)])
    def test_brute_force(self, m, n):
        rng = np.random.default_rng(100 * m + n)
        for _ in range(5):
            t = random_tensor(m, n, rng)
            assert sup_norm_exact_real_linf(t).value == pytest.approx(brute_force_linf_norm(t.entries), rel=1e-13)

    def test_cap(self):
        t = CoefficientTensor(np.ones((5,) * 3))
        with pytest.raises(CapExceededError):
            sup_norm_exact_real_linf(t, cap=9)
        assert sup_norm_exact_real_linf(t, cap=10).value == 125.0
        with pytest.raises(CapExceededError):
            sup_norm_exact_real_linf(t, cap=HARD_CAP + 1)

    def test_complex_rejected(self):
        with pytest.raises(DomainError):
            sup_norm_exact_real_linf(CoefficientTensor(T2, "complex"))


class TestHolderAndAscent:
    def test_holder_t2(self):
        t = CoefficientTensor(T2)
        assert sup_norm_upper_holder(t, "inf").value == 4.0
        with pytest.raises(DomainError):
            sup_norm_upper_holder(t, 1.5)

    @pytest.mark.parametrize("p", ["inf", 4.0, 10.0])
    def test_sandwich(self, p):
        rng = np.random.default_rng(9)
        for _ in range(10):
            t = random_tensor(3, 3, rng)
            lo = sup_norm_ascent(t, p, starts=8, seed=1).value
            hi = sup_norm_upper_holder(t, p).value
            assert lo <= hi + 1e-12

    def test_monotone_history(self):
        t = random_tensor(3, 3, np.random.default_rng(4))
        xs = [np.array([1.0, -0.2, 0.5])] * 3
        _, _, hist = ascent_run(t, "inf", xs)
        assert all(b >= a - 1e-12 for a, b in zip(hist, hist[1:]))

    def test_seed_determinism(self):
        t = random_tensor(3, 2, np.random.default_rng(2))
        a = sup_norm_ascent(t, 6.0, seed=3)
        b = sup_norm_ascent(t, 6.0, seed=3)
        assert a == b

    def test_matrix_l2(self):
        # bilinear form on l2 x l2: operator norm is the largest singular value
        a = np.random.default_rng(8).normal(size=(4, 4))
        t = CoefficientTensor(a)
        ref = np.linalg.svd(a, compute_uv=False)[0]
        assert sup_norm_ascent(t, 2.0, seed=0).value == pytest.approx(ref, rel=1e-8)

    def test_complex_t2(self):
        # complex l_inf norm of [[1,1],[1,-1]] is 2 sqrt 2
        t = CoefficientTensor(T2, "complex")
        assert sup_norm_ascent(t, "inf", seed=0).value == pytest.approx(2 * math.sqrt(2), rel=1e-9)


class TestCertifiedRatio:
    def test_t2(self):
        r = certify_ratio(CoefficientTensor(T2), ["4/3", "4/3"], "inf")
        assert r.denominator.kind == "EXACT"
        assert r.value == pytest.approx(math.sqrt(2), rel=1e-14)

    def test_zero(self):
        with pytest.raises(TensorDataError, match="identically zero"):
            certified_ratio(CoefficientTensor(np.zeros((2, 2))), [1.5, 1.5], "inf")

    def test_fallback_and_require_exact(self):
        t = CoefficientTensor(np.ones((4,) * 3))
        r = certify_ratio(t, [1.5] * 3, "inf", cap=6)
        assert r.denominator.kind == "UPPER_BOUND"
        with pytest.raises(CapExceededError):
            certify_ratio(t, [1.5] * 3, "inf", cap=6, require_exact=True)

    def test_finite_p_uses_holder(self):
        r = certify_ratio(CoefficientTensor(T2), [1.6, 1.6], 8)
        assert r.denominator.kind == "UPPER_BOUND"

    def test_applicable_bound(self):
        assert applicable_upper_bound(2, "inf", ["4/3", "4/3"]) == pytest.approx(math.sqrt(2))
        assert applicable_upper_bound(2, "inf", [1.5, 1.5]) is None
        assert applicable_upper_bound(3, 6, [2.0] * 3) == pytest.approx(2.0)


class TestHadamard:
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_norm_and_ratio(self, m):
        t = hadamard_block_form(m)
        assert t.n == 2 ** (m - 1)
        assert sup_norm_exact_real_linf(t).value == pytest.approx(2 ** (m - 1), rel=1e-12)
        crit = 2 * m / (m + 1)
        assert certified_ratio(t, [crit] * m, "inf") == pytest.approx(bh_lower_real(m).value, rel=1e-10)

    def test_m3_brute_force(self):
        assert brute_force_linf_norm(hadamard_block_form(3).entries) == 4.0

    def test_entry_count(self):
        # support has 4^(m-1) entries of modulus 1
        for m in range(2, 6):
            assert np.count_nonzero(hadamard_block_form(m).entries) == 4 ** (m - 1)

    @pytest.mark.parametrize("bad", [1, 6, 2.5])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            hadamard_block_form(bad)


class TestSearch:
    def test_m2_reaches_sqrt2(self):
        res = search_extremal(2, 2, "inf", ["4/3", "4/3"], iters=3000, seed=7)
        tensor, ratio = res
        assert ratio == pytest.approx(math.sqrt(2), abs=1e-6)
        assert res.bound == pytest.approx(bh_upper(2, "real").value)
        assert res.gap >= -1e-9
        assert certified_ratio(tensor, ["4/3", "4/3"], "inf") == pytest.approx(ratio, rel=1e-12)

    def test_deterministic(self):
        a = search_extremal(2, 3, "inf", ["4/3", "4/3"], iters=500, seed=1)
        b = search_extremal(2, 3, "inf", ["4/3", "4/3"], iters=500, seed=1)
        np.testing.assert_array_equal(a.tensor.entries, b.tensor.entries)
        assert a.ratio == b.ratio

    def test_finite_p(self):
        from bhlab import hl_critical_exponent

        q = [hl_critical_exponent(2, 10)] * 2
        res = search_extremal(2, 2, 10, q, iters=500, seed=0)
        assert 0 < res.ratio <= res.bound + 1e-9

    def test_errors(self):
        with pytest.raises(TensorDataError):
            search_extremal(3, 2, "inf", [1.5, 1.5], iters=10)
        with pytest.raises(CapExceededError):
            search_extremal(3, 20, "inf", [1.5] * 3, iters=10)

    def test_violation_raised(self, monkeypatch):
        import bhlab.verifier as v

        monkeypatch.setattr(v, "applicable_upper_bound", lambda *a, **k: 0.5)
        with pytest.raises(BoundViolationError):
            search_extremal(2, 2, "inf", ["4/3", "4/3"], iters=50, seed=0)
