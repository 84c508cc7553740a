"""Even sets of nodes on a nodal surface, and the binary-code obstruction
that caps the node count of a quintic.

An even set of r nodes supports a double cover with
chi(O_X) = 2*chi(O_S) - r/4, so r must be divisible by 4; once r >= 24
that formula forces chi(O_X) < chi(O_S), which splits the set into two
even sets of at least 16 nodes each. On a quintic with 32 nodes the node
classes would give a >= 6 dimensional binary code of length 32 whose
nonzero weights all lie in {16, 20, 32}; no such code exists, and
``code_search`` certifies that by exhausting the search space.

The nonexistence pipeline is two-stage: a cheap MacWilliams feasibility
filter over candidate weight distributions, then an authoritative
backtracking search. Dual nonnegativity is necessary but not sufficient,
so the search runs regardless of the filter's outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import ResourceLimitError, SearchBudgetExceeded

__all__ = [
    "Certificate",
    "CertStep",
    "ChiResult",
    "EvenSetParams",
    "SearchOutcome",
    "WeightCodeProblem",
    "WeightDistribution",
    "chi_double_cover",
    "code_search",
    "feasible_distributions",
    "krawtchouk_table",
    "macwilliams_dual",
    "quintic_certificate",
]

# chi(O) of the minimal resolution of a nodal quintic surface (p_g = 4)
QUINTIC_CHI = 5

DEFAULT_MAX_N = 40
DEFAULT_MAX_K = 8
DEFAULT_FILTER_BUDGET = 2_000_000


@dataclass(frozen=True)
class EvenSetParams:
    """chi(O_S) of the resolved surface and the size r of a node set.

    Genuine even sets have r divisible by 4; arbitrary r is accepted here
    so that chi_double_cover can report the divisibility obstruction
    instead of refusing the input.
    """

    chi_s: int
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("node count must be nonnegative")


@dataclass(frozen=True)
class ChiResult:
    value: Fraction
    integral: bool
    splitting: bool

    def to_json_dict(self) -> dict:
        return {
            "value": str(self.value),
            "integral": self.integral,
            "splitting": self.splitting,
        }


def chi_double_cover(params: EvenSetParams) -> ChiResult:
    """chi(O) of the double cover branched over an even set of r nodes.

    Exact value 2*chi_s - r/4. A fractional result flags r not divisible
    by 4 (no such even set exists); ``splitting`` flags the drop below
    chi_s that forces the set to split into two smaller even sets.
    """
    value = 2 * params.chi_s - Fraction(params.r, 4)
    integral = value.denominator == 1
    return ChiResult(value=value, integral=integral, splitting=value < params.chi_s)


@lru_cache(maxsize=None)
def krawtchouk_table(n: int) -> tuple[tuple[int, ...], ...]:
    """K[j][i] for 0 <= j, i <= n, by the three-term recurrence
    (j+1) K_{j+1}(i) = (n - 2i) K_j(i) - (n - j + 1) K_{j-1}(i),
    carried out in exact integers."""
    rows = [[1] * (n + 1), [n - 2 * i for i in range(n + 1)]]
    for j in range(1, n):
        nxt = []
        for i in range(n + 1):
            num = (n - 2 * i) * rows[j][i] - (n - j + 1) * rows[j - 1][i]
            if num % (j + 1):
                raise ArithmeticError("Krawtchouk recurrence produced a non-integer (bug)")
            nxt.append(num // (j + 1))
        rows.append(nxt)
    return tuple(tuple(r) for r in rows[: n + 1])


def macwilliams_dual(n: int, k: int, counts) -> tuple[Fraction, ...]:
    """Dual weight distribution B_j = 2^-k * sum_i A_i K_j(i), exact."""
    counts = tuple(counts)
    if len(counts) != n + 1:
        raise ValueError(f"expected n+1 = {n + 1} weight counts, got {len(counts)}")
    K = krawtchouk_table(n)
    scale = 1 << k
    return tuple(
        Fraction(sum(a * K[j][i] for i, a in enumerate(counts)), scale) for j in range(n + 1)
    )


@dataclass(frozen=True)
class WeightCodeProblem:
    """Does a binary [n, k] code exist whose nonzero weights all lie in
    ``allowed``?"""

    n: int
    k: int
    allowed: frozenset[int]

    def __post_init__(self):
        if self.n < 1 or self.k < 0 or self.k > self.n:
            raise ValueError("need 1 <= n and 0 <= k <= n")
        object.__setattr__(self, "allowed", frozenset(self.allowed))
        if any(w < 1 or w > self.n for w in self.allowed):
            raise ValueError("allowed weights must lie in 1..n")


@dataclass(frozen=True)
class WeightDistribution:
    """A_w counts of codewords by weight, indexed 0..n."""

    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.counts) - 1


def feasible_distributions(problem: WeightCodeProblem, *, budget: int = DEFAULT_FILTER_BUDGET) -> list[WeightDistribution]:
    """All weight distributions supported on the allowed weights whose
    MacWilliams dual is nonnegative and integral.

    The enumeration covers every A with A_0 = 1 and the remaining
    2^k - 1 nonzero words spread over the allowed weights. An empty
    result certifies nonexistence on its own; a nonempty one decides
    nothing (the dual conditions are necessary, not sufficient).
    """
    weights = sorted(problem.allowed)
    m = (1 << problem.k) - 1
    t = len(weights)
    if t == 0:
        return [] if m else [WeightDistribution((1,) + (0,) * problem.n)]
    n_candidates = comb(m + t - 1, t - 1)
    if n_candidates > budget:
        raise SearchBudgetExceeded(
            f"{n_candidates} candidate distributions exceed the budget {budget}",
            checkpoint={"candidates": n_candidates, "budget": budget},
        )
    K = krawtchouk_table(problem.n)
    scale = 1 << problem.k
    out = []

    def assign(idx: int, remaining: int, partial: list[int]):
        if idx == t - 1:
            counts = [0] * (problem.n + 1)
            counts[0] = 1
            for w, a in zip(weights, partial + [remaining]):
                counts[w] = a
            for j in range(problem.n + 1):
                s = sum(a * K[j][i] for i, a in enumerate(counts) if a)
                if s < 0 or s % scale:
                    return
            out.append(WeightDistribution(tuple(counts)))
            return
        for a in range(remaining + 1):
            assign(idx + 1, remaining - a, partial + [a])

    assign(0, m, [])
    return out


@dataclass(frozen=True)
class SearchOutcome:
    problem: WeightCodeProblem
    exists: bool
    generators: tuple[int, ...] | None
    nodes: int

    @property
    def verdict(self) -> str:
        return "EXISTS" if self.exists else "NONEXISTENT"

    def generator_bitstrings(self) -> list[str] | None:
        if self.generators is None:
            return None
        return [format(g, f"0{self.problem.n}b") for g in self.generators]


def _verify_witness(problem: WeightCodeProblem, gens: tuple[int, ...]) -> None:
    words = [0]
    for g in gens:
        words += [w ^ g for w in words]
    if len(set(words)) != 1 << problem.k:
        raise ArithmeticError("witness generators are dependent (bug)")
    for w in words[1:]:
        if w.bit_count() not in problem.allowed:
            raise ArithmeticError(f"witness span contains forbidden weight {w.bit_count()} (bug)")


def code_search(
    problem: WeightCodeProblem,
    *,
    node_budget: int | None = None,
    max_n: int = DEFAULT_MAX_N,
    max_k: int = DEFAULT_MAX_K,
) -> SearchOutcome:
    """Exhaustive search for an [n, k] code with all nonzero weights in
    the allowed set.

    The weight condition is invariant under column permutation, so the
    search runs over column-partition canonical forms: the state is a
    partition of the n columns into blocks on which every chosen
    generator row is constant, and a new row is determined (up to a
    permutation fixing all previous rows) by how many ones it places in
    each block. Every span word is constant on blocks too, so all
    2^depth new span weights are checked exactly at each extension; any
    forbidden (or zero, i.e. dependent) word prunes the branch.
    Explored failing states are memoized by their multiset of (row
    pattern, size) blocks, which is a complete column-permutation
    invariant of the partial matrix.

    EXISTS outcomes carry generator rows whose full span has been
    re-verified word by word; NONEXISTENT means the space was exhausted.
    """
    if problem.n > max_n or problem.k > max_k:
        raise ResourceLimitError(
            f"problem ({problem.n}, {problem.k}) exceeds the configured bounds ({max_n}, {max_k})"
        )
    if problem.k == 0:
        return SearchOutcome(problem, True, (), 1)
    allowed = sorted(problem.allowed)
    if not allowed:
        return SearchOutcome(problem, False, None, 1)
    k = problem.k
    nodes = 0
    failed_states: set[tuple] = set()

    def candidate_rows(blocks, depth):
        """All compositions c (ones per block) whose full new span is
        allowed, found block by block with interval pruning."""
        nspan = 1 << depth
        sizes = [b[1] for b in blocks]
        # parity[S][j]: value of span word S on block j
        parity = [
            [(S & blocks[j][0]).bit_count() & 1 for j in range(len(blocks))] for S in range(nspan)
        ]
        suffix = [0] * (len(blocks) + 1)
        for j in range(len(blocks) - 1, -1, -1):
            suffix[j] = suffix[j + 1] + sizes[j]
        results = []

        def extend(j, comp, weights):
            nonlocal nodes
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise SearchBudgetExceeded(
                    f"code search exceeded its node budget of {node_budget}",
                    checkpoint={
                        "n": problem.n,
                        "k": problem.k,
                        "depth_reached": depth,
                        "nodes": nodes,
                        "candidates_found": len(results),
                    },
                )
            if j == len(blocks):
                results.append(tuple(comp))
                return
            for c in range(sizes[j] + 1):
                new_weights = [
                    w + (sizes[j] - c if parity[S][j] else c) for S, w in enumerate(weights)
                ]
                ok = True
                for w in new_weights:
                    hi = w + suffix[j + 1]
                    if not any(w <= a <= hi for a in allowed):
                        ok = False
                        break
                if ok:
                    extend(j + 1, comp + [c], new_weights)

        extend(0, [], [0] * nspan)
        return results

    def split(blocks, comp, depth):
        out = []
        bit = 1 << depth
        for (pat, size), c in zip(blocks, comp):
            if c == size:
                out.append((pat | bit, size))
            elif c == 0:
                out.append((pat, size))
            else:
                out.append((pat | bit, c))
                out.append((pat, size - c))
        return tuple(out)

    def reconstruct(blocks):
        gens = [0] * k
        col = 0
        for pat, size in blocks:
            chunk = ((1 << size) - 1) << col
            for j in range(k):
                if pat >> j & 1:
                    gens[j] |= chunk
            col += size
        return tuple(gens)

    def search(blocks, depth):
        nonlocal nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise SearchBudgetExceeded(
                f"code search exceeded its node budget of {node_budget}",
                checkpoint={"n": problem.n, "k": problem.k, "depth_reached": depth, "nodes": nodes},
            )
        if depth == k:
            return reconstruct(blocks)
        for comp in candidate_rows(blocks, depth):
            child = split(blocks, comp, depth)
            key = (depth + 1, tuple(sorted(child)))
            if key in failed_states:
                continue
            found = search(child, depth + 1)
            if found is not None:
                return found
            failed_states.add(key)
        return None

    witness = search(((0, problem.n),), 0)
    if witness is None:
        return SearchOutcome(problem, False, None, nodes)
    _verify_witness(problem, witness)
    return SearchOutcome(problem, True, witness, nodes)


@dataclass(frozen=True)
class CertStep:
    claim: str
    arithmetic: str
    source: str

    def to_json_dict(self) -> dict:
        return {"claim": self.claim, "arithmetic": self.arithmetic, "source": self.source}


@dataclass(frozen=True)
class Certificate:
    steps: tuple[CertStep, ...]
    verdict: str
    problem: WeightCodeProblem | None
    search: SearchOutcome | None
    filter_count: int | None

    def to_json_dict(self) -> dict:
        return {
            "steps": [s.to_json_dict() for s in self.steps],
            "verdict": self.verdict,
        }


def quintic_certificate(
    b2: int = 53,
    nodes: int = 32,
    min_even: int = 16,
    second_even: int = 20,
    *,
    node_budget: int | None = None,
) -> Certificate:
    """Replay of the numeric chain that rules out the configured node
    count on a quintic surface.

    With b2 = 53 and 32 nodes: the node classes span a totally isotropic
    subspace of H^2(S, Z/2), so their image has dimension at most
    floor(53/2) = 26 and the kernel has dimension at least 6; kernel
    vectors are even sets, whose sizes are forced into {16, 20, 32}; no
    [32, 6] binary code with those weights exists; contradiction. b2 is
    an input, not derived here, and the even-set size menu below 24 is
    likewise taken as given (min_even from Castelnuovo's inequality).
    """
    steps = []
    iso = b2 // 2
    steps.append(
        CertStep(
            claim="node classes span a totally isotropic subspace of H^2(S, Z/2), bounding the image dimension",
            arithmetic=f"floor({b2}/2) = {iso}",
            source="isotropy bound",
        )
    )
    kernel_dim = nodes - iso
    steps.append(
        CertStep(
            claim="the kernel of the node-class map is at least the deficit",
            arithmetic=f"{nodes} - {iso} = {kernel_dim}",
            source="rank-nullity",
        )
    )
    steps.append(
        CertStep(
            claim="even sets have size divisible by 4 (integral double-cover Euler characteristic)",
            arithmetic=f"chi(O_X) = 2*{QUINTIC_CHI} - r/4",
            source="double-cover chi formula",
        )
    )
    for r in range(24, 2 * min_even, 4):
        chi = chi_double_cover(EvenSetParams(QUINTIC_CHI, r))
        steps.append(
            CertStep(
                claim=f"an even set of {r} nodes would drop chi below chi(O_S) and split into two even sets, each >= {min_even}; so {r} is impossible",
                arithmetic=f"2*{QUINTIC_CHI} - {r}/4 = {chi.value} < {QUINTIC_CHI}; split sizes >= 2*{min_even} = {2 * min_even} > {r}",
                source="splitting argument",
            )
        )
    decisive = kernel_dim >= 1 and nodes % 4 == 0 and nodes >= 2 * min_even
    if not decisive:
        steps.append(
            CertStep(
                claim="the arithmetic chain stops here; no nonexistence claim is attempted",
                arithmetic=f"kernel bound {kernel_dim}; node count {nodes} not an admissible decisive configuration",
                source="arithmetic only",
            )
        )
        return Certificate(tuple(steps), "INCONCLUSIVE", None, None, None)
    allowed = frozenset({min_even, second_even, nodes})
    problem = WeightCodeProblem(nodes, kernel_dim, allowed)
    steps.append(
        CertStep(
            claim="kernel vectors are even sets, so every nonzero weight lies in the admissible size menu",
            arithmetic=f"weights in {sorted(allowed)} for a [{nodes}, {kernel_dim}] binary code",
            source="even-set weights",
        )
    )
    filt = feasible_distributions(problem)
    steps.append(
        CertStep(
            claim="MacWilliams feasibility filter over candidate weight distributions",
            arithmetic=f"{len(filt)} distribution(s) pass dual nonnegativity and integrality",
            source="macwilliams filter",
        )
    )
    search = code_search(problem, node_budget=node_budget)
    steps.append(
        CertStep(
            claim=f"exhaustive generator search: {search.verdict}",
            arithmetic=f"{search.nodes} search nodes explored",
            source="code search",
        )
    )
    if not search.exists:
        steps.append(
            CertStep(
                claim=f"no quintic with {nodes} nodes admits this configuration",
                arithmetic=f"kernel dimension >= {kernel_dim} requires a [{nodes}, {kernel_dim}] code with weights {sorted(allowed)}, which does not exist",
                source="contradiction",
            )
        )
        return Certificate(tuple(steps), "CONTRADICTION", problem, search, len(filt))
    dist: dict[int, int] = {}
    words = [0]
    for g in search.generators:
        words += [w ^ g for w in words]
    for w in words[1:]:
        dist[w.bit_count()] = dist.get(w.bit_count(), 0) + 1
    steps.append(
        CertStep(
            claim="the size menu alone yields no contradiction: a code with these weights exists, so the chain stops here",
            arithmetic=f"witness weight distribution {dict(sorted(dist.items()))}",
            source="no contradiction",
        )
    )
    return Certificate(tuple(steps), "INCONCLUSIVE", problem, search, len(filt))
