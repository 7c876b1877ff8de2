"""Matrix inequalities behind the speed-limit derivation, as checkable functions.

Each check returns the two sides so callers can track how tight a random draw
came to saturating the inequality. `run_campaign` is the randomised regression
used by the ``ineq-check`` command.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg

SLACK = 1e-12

# diag(2, 1) and the projector onto (1, 1)/sqrt(2): both spreads equal 1 and
# the commutator's operator norm hits the bound 1/2 exactly.
WITNESS_A = np.diag([2.0, 1.0]).astype(complex)
WITNESS_B = 0.5 * np.ones((2, 2), dtype=complex)


def von_neumann_chain(rho1, rho2):
    """The four quantities of the chain Tr{r1 r2} <= sum s1 s2 <= |s1||s2| <= |r2|_HS."""
    s1 = linalg.singular_values(rho1)
    s2 = linalg.singular_values(rho2)
    return (
        float(np.trace(rho1 @ rho2).real),
        float(np.dot(s1, s2)),
        float(np.linalg.norm(s1) * np.linalg.norm(s2)),
        float(linalg.hs_norm(rho2)),
    )


def trace_inequality(a, b):
    """|Tr{AB}| and min(s1(A) sum s(B), s1(B) sum s(A))."""
    sa = linalg.singular_values(a)
    sb = linalg.singular_values(b)
    lhs = abs(np.trace(a @ b))
    rhs = min(sa[0] * sb.sum(), sb[0] * sa.sum())
    return float(lhs), float(rhs)


def commutator_inequality(a, b):
    """|[A, B]|_op and |A|_spread |B|_spread / 2 (A, B positive semidefinite)."""
    lhs = linalg.operator_norm(linalg.commutator(a, b))
    rhs = 0.5 * linalg.spread_norm(a) * linalg.spread_norm(b)
    return float(lhs), float(rhs)


@dataclass
class CheckTally:
    name: str
    trials: int = 0
    violations: int = 0
    tightest: float = 0.0
    failures: list = field(default_factory=list)

    def record(self, lhs, rhs, scale=1.0):
        self.trials += 1
        if lhs > rhs + SLACK * max(scale, 1.0):
            self.violations += 1
            self.failures.append((lhs, rhs))
        if rhs > 0:
            self.tightest = max(self.tightest, lhs / rhs)


@dataclass
class CampaignReport:
    seed: int
    max_dim: int
    tallies: list
    witness: tuple

    @property
    def violations(self):
        return sum(t.violations for t in self.tallies)

    def format(self):
        lines = [
            f"inequality campaign seed={self.seed} max_dim={self.max_dim}",
            f"{'check':<28}{'trials':>8}{'violations':>12}{'tightest_ratio':>18}",
        ]
        for t in self.tallies:
            lines.append(f"{t.name:<28}{t.trials:>8d}{t.violations:>12d}{t.tightest:>18.9f}")
        lhs, rhs = self.witness
        lines.append(
            "sharpness witness A=diag(2,1) B=[[1/2,1/2],[1/2,1/2]]: "
            f"commutator_op={lhs:.9f} bound={rhs:.9f} ratio={lhs / rhs:.9f}"
        )
        lines.append(f"total violations: {self.violations}")
        return "\n".join(lines) + "\n"


def run_campaign(trials=500, max_dim=8, seed=0):
    """Randomised check of every inequality, `trials` draws each, dims 2..max_dim."""
    rng = np.random.default_rng(seed)
    names = ["vn_trace_le_sigma_dot", "vn_sigma_dot_le_cauchy", "vn_cauchy_le_hs",
             "absolute_trace", "commutator_spread"]
    tallies = {n: CheckTally(n) for n in names}
    hi = max(2, max_dim)
    for _ in range(trials):
        d = int(rng.integers(2, hi + 1))
        r1 = linalg.random_density_matrix(rng, d, rank=int(rng.integers(1, d + 1)))
        r2 = linalg.random_density_matrix(rng, d, rank=int(rng.integers(1, d + 1)))
        a, b, c, e = von_neumann_chain(r1, r2)
        tallies["vn_trace_le_sigma_dot"].record(a, b)
        tallies["vn_sigma_dot_le_cauchy"].record(b, c)
        tallies["vn_cauchy_le_hs"].record(c, e)

        d = int(rng.integers(2, hi + 1))
        x = linalg.random_complex(rng, d)
        y = linalg.random_complex(rng, d)
        lhs, rhs = trace_inequality(x, y)
        tallies["absolute_trace"].record(lhs, rhs, rhs)

        d = int(rng.integers(2, hi + 1))
        p = linalg.random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
        q = linalg.random_psd(rng, d, rank=int(rng.integers(1, d + 1)))
        lhs, rhs = commutator_inequality(p, q)
        tallies["commutator_spread"].record(lhs, rhs, rhs)
    witness = commutator_inequality(WITNESS_A, WITNESS_B)
    return CampaignReport(seed, max_dim, [tallies[n] for n in names], witness)
