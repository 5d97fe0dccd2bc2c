"""Acceptance criteria 1-8.

Each test prints a single ``[PASS]``/``[FAIL]`` line to the terminal.  The
module also runs standalone: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time

import numpy as np
import pytest
from gmpy2 import mpq

from sympcanon.blocks import (
    is_hamiltonian,
    is_symplectic,
    jordan,
    p_block,
    q_block,
    q_prime_block,
    realified_jordan,
)
from sympcanon.canonical import (
    Decomposition,
    Summand,
    canonicalize_complex,
    canonicalize_hamiltonian,
    canonicalize_real,
    hamiltonian_of_form,
    symplectic_eigenvalues,
    symplectically_similar,
    williamson,
)
from sympcanon.matrices import (
    block_direct_sum,
    det,
    direct_sum,
    field_of,
    inverse,
    matrices_equal,
    mul,
    omega,
    rank,
    scale,
    zeros,
)
from sympcanon.polynomials import Polynomial, char_poly
from sympcanon.randomized import (
    conjugated_instance,
    random_complex_decomposition,
    random_real_decomposition,
    random_spd,
    random_symplectic,
)
from sympcanon.scalars import COMPLEX, RATIONAL, GaussianRational
from sympcanon.spectra import is_similar
from sympcanon.verify import Constructors, companion_bidiagonal, deleted_minor, q_prime_conjugator

pytestmark = pytest.mark.acceptance

C_VALUES = (mpq(1), mpq(2), mpq(1, 3))
N_REAL = 200
N_COMPLEX = 200

_lines: list[str] = []


def report(number: int, ok: bool, text: str, request=None):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
    _lines.append(line)
    if request is not None:
        tr = request.config.pluginmanager.getplugin("terminalreporter")
        if tr is not None:
            tr.write_line(line)
            return
    print(line)


# shared instance sets --------------------------------------------------------

_cache: dict = {}


def real_instances():
    if "real" not in _cache:
        out = []
        for seed in range(N_REAL):
            dec = random_real_decomposition(seed)
            A, S = conjugated_instance(dec, seed)
            out.append((dec, A, S))
        _cache["real"] = out
    return _cache["real"]


def real_results():
    if "real_canon" not in _cache:
        _cache["real_canon"] = [canonicalize_real(A, certificate=False) for _, A, _ in real_instances()]
    return _cache["real_canon"]


# 1 ---------------------------------------------------------------------------


def criterion_1():
    ctor = Constructors()
    t0 = time.perf_counter()
    failures = []
    corrected_ok = True
    for n in range(1, 9):
        W = omega(n)
        psi = scale(mul(W, p_block(n)), -1)
        if rank(psi) != 2 * n - 1:
            failures.append(f"rank(-Omega P_{n})")
        J = jordan(n, 0, RATIONAL)
        if not matrices_equal(scale(mul(psi, psi), -1), direct_sum([J.T, J])):
            failures.append(f"square identity n={n}")
        for c in C_VALUES:
            if char_poly(mul(W, q_block(n, c))) != Polynomial.from_ints([c * c, 0, 1]) ** n:
                failures.append(f"char poly n={n} c={c}")
            if n % 2 and n <= 7:
                ci = GaussianRational(0, c)
                d = det(deleted_minor(ctor, n, c))
                if d != (2 * ci) ** (n - 1):
                    failures.append(f"det R_{n}(c={c}) = {d}, expected {(2 * ci) ** (n - 1)}")
                corrected_ok &= d == ci * (2 * ci) ** (n - 1)
                S = q_prime_conjugator(n)
                M = mul(inverse(S), W, q_prime_block(n, c), S)
                if not matrices_equal(M, realified_jordan(n, 0, c)):
                    failures.append(f"Q-prime equality n={n} c={c}")
                # what does hold: the C/I bidiagonal form, similar to the realified block
                corrected_ok &= matrices_equal(M, companion_bidiagonal(n, c)) and is_similar(M, realified_jordan(n, 0, c))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 5
    det_fail = [f for f in failures if f.startswith("det")]
    qprime_fail = [f for f in failures if f.startswith("Q-prime")]
    other = len(failures) - len(det_fail) - len(qprime_fail)
    detail = f"{len(failures)} identity failures in {elapsed:.2f}s"
    if det_fail or qprime_fail:
        detail += (
            f"; {len(det_fail)} det R_n = (2ci)^(n-1), {len(qprime_fail)} literal Q-prime equalities at c != 1,"
            f" {other} other; corrected forms (det = ci*(2ci)^(n-1), Q-prime form up to similarity)"
            f" {'hold' if corrected_ok else 'FAIL'}; first: {failures[0]}"
        )
    return ok, detail, failures


def test_criterion_1_structural_identities(request):
    ok, detail, failures = criterion_1()
    report(1, ok, "exact structural identities, n <= 8 : " + detail, request)
    assert ok, failures


# 2 ---------------------------------------------------------------------------


def criterion_2():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = [0.0, 0.0, 0.0]
    bad = 0
    for _ in range(100):
        n = int(rng.integers(1, 11))
        A = random_spd(2 * n, rng)
        D, S = williamson(A)
        W = omega(n, COMPLEX).real
        r1 = np.linalg.norm(S.T @ A @ S - np.kron(np.eye(2), D)) / np.linalg.norm(A)
        r2 = np.linalg.norm(S.T @ W @ S - W)
        alphas = np.array(symplectic_eigenvalues(A))
        moduli = np.sort(np.abs(np.linalg.eigvals(W @ A).imag))[::-1][::2]
        r3 = np.max(np.abs(alphas - moduli) / moduli)
        desc = bool(np.all(np.diff(alphas) <= 0))
        worst = [max(worst[0], r1), max(worst[1], r2), max(worst[2], r3)]
        if not (r1 <= 1e-8 and r2 <= 1e-10 and r3 <= 1e-8 and desc):
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    return ok, f"{100 - bad}/100 ok, worst residuals {worst[0]:.1e}/{worst[1]:.1e}/{worst[2]:.1e}, {elapsed:.2f}s"


def test_criterion_2_williamson(request):
    ok, detail = criterion_2()
    report(2, ok, "Williamson residuals : " + detail, request)
    assert ok, detail


# 3 ---------------------------------------------------------------------------


def criterion_3():
    t0 = time.perf_counter()
    inst = real_instances()
    res = real_results()
    wrong = [i for i, ((dec, _, _), r) in enumerate(zip(inst, res)) if not r.matches(dec)]
    elapsed = time.perf_counter() - t0
    ok = not wrong and elapsed < 60
    return ok, f"{len(inst) - len(wrong)}/{len(inst)} recovered in {elapsed:.1f}s", wrong


def test_criterion_3_real_round_trip(request):
    ok, detail, wrong = criterion_3()
    report(3, ok, "real round trip : " + detail, request)
    assert ok, wrong


# 4 ---------------------------------------------------------------------------


def criterion_4():
    t0 = time.perf_counter()
    wrong = []
    for seed in range(N_COMPLEX):
        dec = random_complex_decomposition(seed)
        A, _ = conjugated_instance(dec, seed)
        if not canonicalize_complex(A, certificate=False).matches(dec):
            wrong.append(seed)
    elapsed = time.perf_counter() - t0
    return not wrong, f"{N_COMPLEX - len(wrong)}/{N_COMPLEX} recovered in {elapsed:.1f}s", wrong


def test_criterion_4_complex_round_trip(request):
    ok, detail, wrong = criterion_4()
    report(4, ok, "complex round trip ({a,-a} identified) : " + detail, request)
    assert ok, wrong


# 5 ---------------------------------------------------------------------------


def _complex_pair(rng):
    """``H`` and ``T^{-1} H T`` with a non-symplectic ``T``.

    ``H = S^{-1} diag(L, -L) S``; ``T = S^{-1} D Pi R`` with a random diagonal
    ``D``, the half swap ``Pi`` and a random symplectic ``R``, so that
    ``T^{-1} H T = R^{-1} diag(-L, L) R`` stays Hamiltonian.
    """
    m = int(rng.integers(1, 4))
    lam = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    S = random_symplectic(m, COMPLEX, rng, factors=3)
    R = random_symplectic(m, COMPLEX, rng, factors=3)
    H = np.linalg.solve(S, np.diag(np.concatenate([lam, -lam])) @ S)
    D = np.diag(rng.uniform(0.5, 2.0, 2 * m) * np.exp(1j * rng.uniform(0, 2 * np.pi, 2 * m)))
    Pi = np.zeros((2 * m, 2 * m))
    for j in range(m):
        Pi[j, m + j] = Pi[m + j, j] = 1
    T = np.linalg.solve(S, D @ Pi @ R)
    H2 = np.linalg.solve(T, H @ T)
    return H, H2, T


def criterion_5():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    complex_bad = 0
    for _ in range(100):
        H, H2, T = _complex_pair(rng)
        assert not is_symplectic(T, 1e-6)
        assert is_hamiltonian(H, 1e-6) and is_hamiltonian(H2, 1e-6)
        if not symplectically_similar(H, H2):
            complex_bad += 1
    real_bad = 0
    for seed in range(50):
        r = np.random.default_rng(10_000 + seed)
        k = int(r.integers(1, 4))
        qs = [Summand("Q", int(r.integers(1, 3)), 1, c=mpq(int(r.integers(1, 4)))) for _ in range(k)]
        flip = int(r.integers(0, k))
        qs2 = [s.negated() if i == flip else s for i, s in enumerate(qs)]
        A1, _ = conjugated_instance(Decomposition(tuple(qs)), r)
        A2, _ = conjugated_instance(Decomposition(tuple(qs2)), r)
        H1, H2 = hamiltonian_of_form(A1), hamiltonian_of_form(A2)
        if not (is_similar(H1, H2) and not symplectically_similar(H1, H2)):
            real_bad += 1
    elapsed = time.perf_counter() - t0
    ok = complex_bad == 0 and real_bad == 0
    return ok, f"complex {100 - complex_bad}/100 similar; real counterexamples {50 - real_bad}/50 rejected; {elapsed:.1f}s"


def test_criterion_5_complex_iff_similarity(request):
    ok, detail = criterion_5()
    report(5, ok, "similarity vs symplectic similarity : " + detail, request)
    assert ok, detail


# 6 ---------------------------------------------------------------------------


def criterion_6():
    inst = real_instances()[:100]
    res = real_results()[:100]
    wrong = []
    for i, ((dec, A, _), r) in enumerate(zip(inst, res)):
        neg = canonicalize_real(scale(A, -1), certificate=False)
        if not (neg.matches(r.negated()) and neg.matches(dec.negated())):
            wrong.append(i)
    return not wrong, f"{100 - len(wrong)}/100 negated decompositions match", wrong


def test_criterion_6_negation_law(request):
    ok, detail, wrong = criterion_6()
    report(6, ok, "negation law : " + detail, request)
    assert ok, wrong


# 7 ---------------------------------------------------------------------------


def _hamiltonian_image(s: Summand) -> np.ndarray:
    """``[[0, Phi^T], [Phi, 0]]``, ``±P_n`` or ``±Q_n(c)``."""
    if s.kind != "hyperbolic":
        return s.block()
    ph = s.phi()
    n = ph.shape[0]
    M = zeros(2 * n, 2 * n, field_of(ph))
    M[:n, n:] = ph.T
    M[n:, :n] = ph
    return M


def criterion_7():
    inst = real_instances()
    res = real_results()
    wrong = []
    for i, ((dec, A, _), r) in enumerate(zip(inst, res)):
        m = A.shape[0] // 2
        h = canonicalize_hamiltonian(mul(omega(m), A), "real", certificate=False)
        ok = h.form == "hamiltonian" and h.matches(r) and len(h.summands) == len(r.summands)
        if ok:
            for s in h.summands:
                if not matrices_equal(s.hamiltonian_block(), mul(omega(s.n), _hamiltonian_image(s))):
                    ok = False
        if ok:
            big = block_direct_sum([_hamiltonian_image(s) for s in h.summands])
            ok = matrices_equal(h.assemble(), mul(omega(m), big))
        if not ok:
            wrong.append(i)
    return not wrong, f"{len(inst) - len(wrong)}/{len(inst)} Hamiltonian images match summand by summand", wrong


def test_criterion_7_hamiltonian_correspondence(request):
    ok, detail, wrong = criterion_7()
    report(7, ok, "Hamiltonian correspondence : " + detail, request)
    assert ok, wrong


# 8 ---------------------------------------------------------------------------


def criterion_8():
    rng = np.random.default_rng(88)
    wrong = 0
    for _ in range(50):
        n = int(rng.integers(1, 9))
        A = random_spd(2 * n, rng)
        alphas = symplectic_eigenvalues(A)
        dec = canonicalize_real(A, certificate=False)
        target = Decomposition(tuple(Summand("Q", 1, 1, c=a) for a in alphas))
        if not (dec.matches(target, 1e-6) and all(s.kind == "Q" and s.n == 1 and s.sign == 1 for s in dec.summands)):
            wrong += 1
    return wrong == 0, f"{50 - wrong}/50 SPD forms are +Q_1(alpha_j) sums"


def test_criterion_8_williamson_uniqueness(request):
    ok, detail = criterion_8()
    report(8, ok, "Williamson cross-check : " + detail, request)
    assert ok, detail


if __name__ == "__main__":
    funcs = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]
    status = 0
    for k, fn in enumerate(funcs, start=1):
        out = fn()
        report(k, out[0], out[1])
        status |= not out[0]
    sys.exit(status)
