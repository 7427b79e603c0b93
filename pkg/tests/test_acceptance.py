"""The ten acceptance checks at their stated tolerances, one verdict line each."""
import math
import time

import numpy as np
import pytest
from scipy import integrate as sint

from usptrace import distribution as d
from usptrace import frobenius as fr
from usptrace import symmetric as sym
from usptrace import weyl
from usptrace.specfun import catalan


def companion_all_real(s: np.ndarray) -> np.ndarray:
    """Oracle: eigenvalues of the companion matrix of u^g - s1 u^(g-1) + ... all real."""
    n, g = s.shape
    comp = np.zeros((n, g, g))
    comp[:, 0, :] = [[(-1) ** k * v for k, v in enumerate(row)] for row in s]
    for i in range(1, g):
        comp[:, i, i - 1] = 1.0
    eig = np.linalg.eigvals(comp)
    scale = np.maximum(1.0, np.max(np.abs(eig), axis=1))
    return np.all(np.abs(eig.imag) <= 1e-6 * scale[:, None], axis=1)


def test_c01_four_formula_agreement(verdict):
    xs = np.linspace(-3.99, 3.99, 399)
    t0 = time.perf_counter()
    table = np.array([[d.f_tau_g2(x, m) for x in xs] for m in ("hypergeometric", "legendre", "elliptic", "meijer", "slice")])
    elapsed = time.perf_counter() - t0
    dev = float(np.max(table.max(axis=0) - table.min(axis=0)))
    ok = dev < 1e-8 and elapsed < 5.0
    assert verdict(1, ok, f"max pairwise deviation {dev:.2e} (< 1e-8), {elapsed:.2f} s (< 5 s)")


def test_c02_exact_point_values(verdict):
    errs = {
        "f_tau(0)": (abs(d.f_tau_g2(0.0) - 64 / (15 * math.pi**2)), 1e-10),
        "f_rho(0)": (abs(d.f_rho(0.0) - 8 / (3 * math.pi**2)), 1e-10),
        "f_tau2(0)": (abs(d.f_tau2(0.0) - 8 / (3 * math.pi**2)), 1e-8),
        "nu_2(0,-4/3)": (abs(d.nu_density((0.0, -4.0 / 3.0)) - 8 / (3 * math.sqrt(3) * math.pi**2)), 1e-12),
    }
    ok = all(e < tol for e, tol in errs.values())
    assert verdict(2, ok, ", ".join(f"{k} err {e:.1e}" for k, (e, _) in errs.items()))


def _moment(density, n, lo, hi, pts):
    val, _ = sint.quad(lambda x: x**n * density(x), lo, hi, points=pts, epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


def test_c03_moments_by_quadrature(verdict):
    worst = 0.0
    mihailovs = [1, 1, 3, 14, 84, 594, 4719]
    for n, want in enumerate(mihailovs):
        worst = max(worst, abs(_moment(d.f_tau_g2, 2 * n, -4, 4, [0.0]) / want - 1))
    for n in range(9):
        k = n // 2
        want = catalan(k) * catalan(k + 1) if n % 2 == 0 else -catalan(k + 1) ** 2
        worst = max(worst, abs(_moment(d.f_tau2, n, -4, 4, [-2.0, 0.0]) / want - 1))
    for n in range(7):
        want = catalan(n) * catalan(n + 1)
        worst = max(worst, abs(_moment(d.f_rho, 2 * n, -4, 4, [0.0]) / want - 1))
    assert verdict(3, worst < 1e-6, f"worst relative moment error {worst:.1e} (< 1e-6)")


def test_c04_characteristic_function_duality(verdict):
    ts = np.arange(1, 21) * 0.5
    fourier = 0.0
    hyper = 0.0
    for t in ts:
        val, _ = sint.quad(d.f_tau_g2, 0, 4, weight="cos", wvar=t, epsabs=1e-13, limit=400)
        bessel = d.charfn("tau_g2", t, "bessel")
        fourier = max(fourier, abs(bessel - 2 * val))
        hyper = max(hyper, abs(bessel - d.hyp1f2_tau_g2(t)))
    ok = fourier < 1e-5 and hyper < 1e-10
    assert verdict(4, ok, f"vs Fourier transform {fourier:.1e} (< 1e-5), vs 1F2 {hyper:.1e} (< 1e-10)")


def test_c05_genus_three_pipeline(verdict):
    t0 = time.perf_counter()
    exact = [1, 1, 3, 15, 104, 909]
    raw = [weyl.integrate(lambda v, n=n: v.sum(axis=1) ** (2 * n), 3, tol=1e-9 * 6.0 ** (2 * n)) for n in range(6)]
    mom_err = max(abs(r / e - 1) for r, e in zip(raw, exact))
    rounded = [round(r) for r in raw] == exact
    cf_err = max(abs(d.charfn("tau_g3", t, "bessel") - d.charfn("tau_g3", t, "quadrature")) for t in (0.5, 1.0, 2.0))
    f_slice = d.f_tau_slice(3, 0.0)
    f_rec = float(d.f_tau_g3_reconstruct(0.0))
    elapsed = time.perf_counter() - t0
    ok = (rounded and mom_err < 1e-4 and cf_err < 1e-5 and abs(f_slice - 0.3965) <= 2e-3
          and abs(f_rec - 0.3965) <= 2e-3 and elapsed < 180)
    assert verdict(5, ok, f"moments rel err {mom_err:.1e}, charfn err {cf_err:.1e}, f(0) slice {f_slice:.6f} "
                          f"reconstruction {f_rec:.6f}, {elapsed:.1f} s")


def _ks_statistic(samples: np.ndarray) -> float:
    xs = np.sort(samples)
    n = xs.size
    cdf = np.concatenate([d.cdf_tau_g2(xs[i : i + 100000]) for i in range(0, n, 100000)])
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


def test_c06_sampler_law(verdict):
    notes = []
    ok = True
    for g in (2, 3):
        s = weyl.sample(g, 10**6, seed=2024)
        tr = s.trace
        mean, var = float(tr.mean()), float(tr.var())
        peak = float(np.max(weyl.density_t(s.t)))
        rate = s.acceptance_rate * weyl.ENVELOPE[g] * 4**g
        ok &= abs(mean) <= 0.004 and abs(var - 1) <= 0.01 and peak <= weyl.ENVELOPE[g] and 0.9 <= rate <= 1.1
        notes.append(f"g={g} mean {mean:+.4f} var {var:.4f} acc/expected {rate:.3f}")
        if g == 2:
            ks = _ks_statistic(tr)
            ok &= ks < 0.002
            notes.append(f"KS {ks:.5f}")
    assert verdict(6, ok, ", ".join(notes))


def test_c07_alcove_oracle(verdict):
    rng = np.random.default_rng(7)
    notes = []
    ok = True
    for g, box in ((2, (4, 4)), (3, (6, 12, 8))):
        s = np.column_stack([rng.uniform(-b, b, 10**5) for b in box])
        point = sym.SymmetricPoint(tuple(s.T))
        got = sym.in_pi(point)
        minors = np.array(sym.bezoutian_minors(point)[1:])
        band = np.min(np.abs(minors), axis=0) < 1e-7
        bad = int(np.sum((got != companion_all_real(s)) & ~band))
        t = rng.uniform(-2, 2, size=(g, 10**5))
        misses = int(np.sum(~sym.in_sigma(sym.viete(tuple(t))).in_sigma))
        ok &= bad == 0 and misses == 0
        notes.append(f"g={g}: {bad} oracle disagreements, {misses} image points outside")
    assert verdict(7, ok, "; ".join(notes))


def test_c08_appendix_formulas(verdict):
    rng = np.random.default_rng(8)
    worst_coef = worst_ext = worst_round = 0.0
    binom_ok = True
    for g in (2, 3):
        t = rng.uniform(-2, 2, size=(10**4, g))
        poly = sym.coeffs_from_sym(sym.viete(tuple(t.T)))
        coeffs = np.array([np.broadcast_to(c, t.shape[:1]) for c in poly.coefficients()])
        theta = np.arccos(t / 2)
        eig = np.concatenate([np.exp(1j * theta), np.exp(-1j * theta)], axis=1)
        for i in range(t.shape[0]):
            brute = np.array([1.0])
            for x in t[i]:
                brute = np.convolve(brute, [1.0, -x, 1.0])
            worst_coef = max(worst_coef, float(np.max(np.abs(coeffs[:, i] - brute))))
            ref = np.poly(eig[i]).real
            ext = [(-1) ** n * ref[n] for n in range(2 * g + 1)]
            got = [sym.exterior_trace(t[i], n) for n in range(2 * g + 1)]
            worst_ext = max(worst_ext, max(abs(a - b) for a, b in zip(got, ext)))
        back = sym.sym_from_coeffs(poly)
        start = sym.viete(tuple(t.T))
        worst_round = max(worst_round, max(float(np.max(np.abs(a - b))) for a, b in zip(back.s, start.s)))
        binom_ok &= [sym.exterior_trace((2,) * g, n) for n in range(2 * g + 1)] == [math.comb(2 * g, n) for n in range(2 * g + 1)]
    ok = worst_coef < 1e-12 and worst_ext < 1e-12 and worst_round < 1e-9 and binom_ok
    assert verdict(8, ok, f"coeffs {worst_coef:.1e}, exterior traces {worst_ext:.1e}, round trip {worst_round:.1e}, "
                          f"identity binomials {'ok' if binom_ok else 'wrong'}")


def test_c09_character_orthogonality(verdict):
    worst = 0.0
    for g in (2, 3):
        for n in range(g + 1):
            val = weyl.integrate(lambda v, n=n: sym.exterior_trace(tuple(v.T), n), g)
            worst = max(worst, abs(val - (1.0 if n % 2 == 0 else 0.0)))
    assert verdict(9, worst < 1e-8, f"max |integral - eps_n| {worst:.1e} (< 1e-8)")


def test_c10_equidistribution(verdict):
    t0 = time.perf_counter()
    dists = []
    ok = True
    notes = []
    for p, mode, n in ((3, "exhaustive", None), (5, "exhaustive", None), (7, "exhaustive", None),
                       (11, "sample", 10**6), (13, "sample", 10**6)):
        e = fr.scan_curves(p, mode, n, seed=13)
        rep = fr.compare_to_theory(e)
        band = 3 / math.sqrt(p)
        ok &= abs(rep.mean_a1) <= band and abs(rep.mean_a2 - 1) <= band
        ok &= abs(rep.mean_n1 - p) <= 3 * math.sqrt(p)
        ok &= e.weil_failures().size == 0
        dists.append(rep.sup_cdf_distance)
        notes.append(f"p={p} D={rep.sup_cdf_distance:.4f}")
    decreasing = all(a > b for a, b in zip(dists, dists[1:]))
    elapsed = time.perf_counter() - t0
    ok &= decreasing and elapsed < 480
    assert verdict(10, ok, ", ".join(notes) + f", strictly decreasing: {decreasing}, {elapsed:.0f} s")
