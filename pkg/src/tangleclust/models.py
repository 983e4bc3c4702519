"""Synthetic instance generators and numeric theorem-bound evaluators.

Three ground-truth models: noisy binary questionnaires over hidden answer
stereotypes ("mindsets"), two-block stochastic block model graphs (sampled
or in expectation), and isotropic Gaussian mixtures.  The evaluators turn
the recovery guarantees for those models into plain numbers.
"""

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .cutgen import Graph, PointCloud
from .errors import BadParamsError, TooLargeError
from .util import derive_rng

NONDEGENERACY_LIMIT = 20


def _group_sizes(n: int, k: int) -> list:
    """Split n into k groups as evenly as possible, remainder to low indices."""
    base, rem = divmod(n, k)
    return [base + (1 if i < rem else 0) for i in range(k)]


@dataclass(frozen=True)
class MindsetInstance:
    mindsets: np.ndarray   # k x m binary stereotype answers
    answers: np.ndarray    # n x m binary matrix
    labels: np.ndarray     # ground-truth group per person
    n: int
    m: int
    k: int
    p: float
    seed: int


def gen_mindsets(n: int, m: int, k: int, p: float, seed: int = 0) -> MindsetInstance:
    """Sample k coin-flip stereotypes and n noisy respondents.

    Each person copies their group's stereotype and flips every answer
    independently with probability ``p``.  Group sizes are as equal as
    possible; labels are sorted ascending.
    """
    if not (1 <= k <= n):
        raise BadParamsError("need 1 <= k <= n")
    if m < 1:
        raise BadParamsError("need at least one question")
    if not (0.0 <= p < 0.5):
        raise BadParamsError("noise must be in [0, 0.5)")
    rng = derive_rng(seed, "mindsets")
    mindsets = rng.integers(0, 2, size=(k, m), dtype=np.int8)
    labels = np.repeat(np.arange(k), _group_sizes(n, k))
    flips = rng.random((n, m)) < p
    answers = (mindsets[labels] ^ flips).astype(np.int8)
    return MindsetInstance(mindsets=mindsets, answers=answers, labels=labels,
                           n=n, m=m, k=k, p=p, seed=seed)


def check_nondegeneracy(mindsets, limit: int = NONDEGENERACY_LIMIT) -> bool:
    """Exhaustively test that the stereotypes support no extra orientation.

    Degenerate means: some non-stereotype vector agrees, on every triple of
    question indices (with repetition), with at least one stereotype.  Scans
    all 2^m candidates, so ``m`` is capped by ``limit``.
    """
    mu = np.asarray(mindsets, dtype=np.int8)
    k, m = mu.shape
    if m > limit:
        raise TooLargeError(f"m={m} exceeds brute-force limit {limit}")
    codes = np.arange(1 << m, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(m)) & 1).astype(np.int8)
    mindset_codes = {int((row << np.arange(m)).sum()) for row in mu.astype(np.int64)}
    for x, y, z in combinations_with_replacement(range(m), 3):
        covered = np.zeros(codes.size, dtype=bool)
        for i in range(k):
            covered |= ((bits[:, x] == mu[i, x])
                        & (bits[:, y] == mu[i, y])
                        & (bits[:, z] == mu[i, z]))
        codes = codes[covered]
        bits = bits[covered]
        if codes.size == len(mindset_codes):
            break  # stereotypes always survive, nothing left to eliminate
    return set(int(c) for c in codes) == mindset_codes


@dataclass(frozen=True)
class SbmInstance:
    labels: np.ndarray
    graph: Graph
    n: int
    blocks: int
    p: float
    q: float
    seed: int
    expected_mode: bool


def gen_sbm(n: int, blocks: int, p: float, q: float, seed: int = 0,
            expected_mode: bool = False) -> SbmInstance:
    """Two-or-more-block SBM; expected mode yields the weighted complete graph.

    Sampled mode draws unweighted Bernoulli edges (p within, q across);
    expected mode carries the probabilities themselves as edge weights.
    """
    if not (0.0 <= q < p <= 1.0):
        raise BadParamsError("need 0 <= q < p <= 1")
    if not (1 <= blocks <= n):
        raise BadParamsError("need 1 <= blocks <= n")
    labels = np.repeat(np.arange(blocks), _group_sizes(n, blocks))
    edges = []
    if expected_mode:
        for u in range(n):
            for v in range(u + 1, n):
                edges.append((u, v, p if labels[u] == labels[v] else q))
    else:
        rng = derive_rng(seed, "sbm")
        draws = rng.random((n, n))
        same = labels[:, None] == labels[None, :]
        prob = np.where(same, p, q)
        hit = draws < prob
        for u in range(n):
            for v in range(u + 1, n):
                if hit[u, v]:
                    edges.append((u, v, 1.0))
    graph = Graph(n=n, edges=tuple(edges))
    return SbmInstance(labels=labels, graph=graph, n=n, blocks=blocks,
                       p=p, q=q, seed=seed, expected_mode=expected_mode)


@dataclass(frozen=True)
class GmmInstance:
    centers: np.ndarray
    sigma: float
    points: PointCloud
    labels: np.ndarray
    n: int
    seed: int


def gen_gmm(centers, sigma: float, n: int, seed: int = 0) -> GmmInstance:
    """Equal-weight isotropic Gaussian mixture with exact label proportions."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim == 1:
        centers = centers[:, None]
    k = centers.shape[0]
    if sigma <= 0:
        raise BadParamsError("sigma must be > 0")
    if not (1 <= k <= n):
        raise BadParamsError("need 1 <= #centers <= n")
    rng = derive_rng(seed, "gmm")
    labels = np.repeat(np.arange(k), _group_sizes(n, k))
    points = centers[labels] + sigma * rng.standard_normal((n, centers.shape[1]))
    return GmmInstance(centers=centers, sigma=float(sigma),
                       points=PointCloud(points), labels=labels, n=n, seed=seed)


def expected_sbm_cut_cost(alpha1: float, alpha2: float, n: int, p: float, q: float) -> float:
    """Expected cut weight when side A holds fractions (alpha1, alpha2) of the blocks."""
    if not (0.0 <= alpha1 <= 1.0 and 0.0 <= alpha2 <= 1.0):
        raise BadParamsError("block fractions must lie in [0, 1]")
    a1, a2 = alpha1, alpha2
    return (n * n / 4.0) * (p * (a1 - a1 ** 2 + a2 - a2 ** 2)
                            + q * (a1 + a2 - 2.0 * a1 * a2))


@dataclass(frozen=True)
class Thm1Bounds:
    prob_missing: float
    prob_spurious: float
    valid: bool

    def as_dict(self) -> dict:
        return {"prob_missing": self.prob_missing,
                "prob_spurious": self.prob_spurious,
                "valid": self.valid}


def thm1_bounds(n: int, m: int, k: int, p: float, a: int) -> Thm1Bounds:
    """Questionnaire-recovery failure bounds and their parameter gates.

    ``prob_missing`` bounds the chance that some stereotype is not a tangle;
    ``prob_spurious`` the chance of a tangle matching no stereotype.  The
    gates require p < 1/(k+3) and p*n < a < (1-3p)*n/k.  (The equivalent
    per-direction forms place the same exponents as
    -(2n/9k)(1-ka/n-3p)^2 and -(2n/k)(a/n-p)^2.)
    """
    missing = k * m * math.exp(-2.0 * n * (k * a / n - 1.0 + 3.0 * p) ** 2 / (9.0 * k))
    spurious = k * m * math.exp(-2.0 * n * (a / n - p) ** 2 / k)
    valid = (p < 1.0 / (k + 3)) and (p * n < a < (1.0 - 3.0 * p) * n / k)
    return Thm1Bounds(prob_missing=missing, prob_spurious=spurious, valid=valid)


@dataclass(frozen=True)
class Thm2PsiRange:
    lower: float | None
    upper: float | None
    empty: bool
    non_identifiable: bool

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "empty": self.empty,
                "non_identifiable": self.non_identifiable}


def thm2_psi_range(n: int, p: float, q: float, a: int) -> Thm2PsiRange:
    """Admissible cost-threshold window for exact 2-block recovery.

    The window is [q(n/2)^2, (n^2/4) p (xi t / 3 - (t/3)^2)) with
    xi = 1 + q/p and t = xi - 2a/n, gated on a >= 2 and
    p > 3qn/(n - 2a).  ``non_identifiable`` flags p < 2q, where at most
    one tangle exists at any threshold.
    """
    if a < 2:
        raise BadParamsError("agreement must be >= 2")
    non_identifiable = p < 2.0 * q
    gate = (n - 2.0 * a) > 0 and p > 3.0 * q * n / (n - 2.0 * a)
    if not gate:
        return Thm2PsiRange(None, None, True, non_identifiable)
    lower = q * (n / 2.0) ** 2
    xi = 1.0 + q / p
    t = xi - 2.0 * a / n
    upper = (n * n / 4.0) * p * (xi * t / 3.0 - (t / 3.0) ** 2)
    if lower >= upper:
        return Thm2PsiRange(None, None, True, non_identifiable)
    return Thm2PsiRange(lower, upper, False, non_identifiable)


# The uniqueness constant is 0.06 as stated; the derivation actually yields
# 0.056, which we expose alongside.
GAUSS_UNIQUENESS_CONSTANT = 0.06
GAUSS_UNIQUENESS_CONSTANT_PROOF = 0.056


@dataclass(frozen=True)
class GaussAgreementRange:
    a_max_existence: float
    a_min_uniqueness: float | None
    a_min_uniqueness_proof: float | None
    q: float | None
    axis: int
    separation: float
    no_separation: bool

    def as_dict(self) -> dict:
        return {"a_max_existence": self.a_max_existence,
                "a_min_uniqueness": self.a_min_uniqueness,
                "a_min_uniqueness_proof": self.a_min_uniqueness_proof,
                "q": self.q, "axis": self.axis, "separation": self.separation,
                "no_separation": self.no_separation}


def thm_gauss_agreement_range(mu, nu, sigma: float, n: int) -> GaussAgreementRange:
    """Agreement bounds for two-Gaussian recovery with axis cuts.

    Existence of both cluster tangles needs a < n/12; uniqueness needs
    a > n (0.42 q + 0.06) with q = (1 + erf(-d / (2 sqrt(2 sigma^2)))) / 2
    on the best-separated axis, provided that axis has d > 2 sigma.
    """
    if sigma <= 0:
        raise BadParamsError("sigma must be > 0")
    mu = np.asarray(mu, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    if mu.shape != nu.shape:
        raise BadParamsError("centers must have the same dimension")
    gaps = np.abs(nu - mu)
    axis = int(np.argmax(gaps))
    d = float(gaps[axis])
    a_max = n / 12.0
    if d <= 2.0 * sigma:
        return GaussAgreementRange(a_max, None, None, None, axis, d, True)
    q = (1.0 + math.erf(-d / (2.0 * math.sqrt(2.0 * sigma ** 2)))) / 2.0
    return GaussAgreementRange(
        a_max_existence=a_max,
        a_min_uniqueness=n * (0.42 * q + GAUSS_UNIQUENESS_CONSTANT),
        a_min_uniqueness_proof=n * (0.42 * q + GAUSS_UNIQUENESS_CONSTANT_PROOF),
        q=q, axis=axis, separation=d, no_separation=False)
