"""Comb-tooth allocation for a fully connected N-user network.

One central source emits entangled tooth pairs at offsets +/-n times the
comb spacing; each magnitude n supplies two independent EPR instances
(orientation A: signal at -n / idler at +n; orientation B: mirrored).
The planner checks the resource budget - modulation bandwidth for the
local oscillators, down-conversion bandwidth, waveshaper spacing,
technical-noise cleanliness - and assigns one instance to every user
pair such that no user receives the same signed tooth twice (each
frequency slot at a user also carries its polarization-multiplexed local
oscillator, so one slot per frequency per user is a hard constraint).

allocate() is a deterministic backtracking search over the edges of K_N
in lexicographic order; verify_plan() re-checks every invariant from
scratch and shares no code with it.
"""
import itertools
import math
import statistics
from dataclasses import dataclass

from .errors import AllocationFailed, DomainError, InfeasibleSpacing
from .keyrate import key_rate
from .link import LinkParams, apply_source_loss, received_covariance
from .opo import sideband_cleanliness, source_covariance

ORIENTATIONS = ("A", "B")


@dataclass(frozen=True)
class NetworkSpec:
    """Budget inputs for an N-user fully connected network."""
    n_users: int
    fsr_hz: float = 15e9
    mod_bandwidth_hz: float = 45e9
    ws_min_spacing_hz: float = 10e9
    comb_bandwidth_hz: float = 3e12
    noise_clean_threshold: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.n_users, int) or self.n_users < 2:
            raise DomainError(f"n_users must be an integer >= 2, got {self.n_users!r}")
        for name in ("fsr_hz", "mod_bandwidth_hz", "ws_min_spacing_hz",
                     "comb_bandwidth_hz", "noise_clean_threshold"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class BudgetReport:
    """Resource accounting behind a feasibility verdict."""
    pairs_needed: int
    pairs_available: int
    k_max: int
    usable_magnitudes: tuple
    feasible: bool
    limiting_constraint: str
    # local-oscillator branch counts: one per pair as stated, and the
    # smaller count possible when both orientations of a magnitude share
    # one modulated branch
    lo_branches_per_pair: int
    lo_branches_shared: int


@dataclass(frozen=True)
class PairAssignment:
    """One user pair served by one EPR instance.

    orientation "A" places the signal tooth at -magnitude and the idler
    at +magnitude; "B" is the mirror image.  het_user is the
    reconciliation reference (the heterodyne side, mode A of the key
    rate).
    """
    users: tuple
    magnitude: int
    orientation: str
    signal_user: int
    idler_user: int
    het_user: int

    @property
    def signal_tooth(self):
        return -self.magnitude if self.orientation == "A" else self.magnitude

    @property
    def idler_tooth(self):
        return -self.signal_tooth

    def tooth_of(self, user):
        if user == self.signal_user:
            return self.signal_tooth
        if user == self.idler_user:
            return self.idler_tooth
        raise DomainError(f"user {user} is not part of pair {self.users}")

    def to_record(self):
        return {
            "users": list(self.users),
            "magnitude": self.magnitude,
            "orientation": self.orientation,
            "signal_user": self.signal_user,
            "idler_user": self.idler_user,
            "het_user": self.het_user,
            "frequencies": {str(u): self.tooth_of(u) for u in self.users},
        }


@dataclass(frozen=True)
class NetworkPlan:
    """A complete assignment plus the budget that admitted it."""
    n_users: int
    assignments: tuple
    per_user_teeth: dict
    feasible: bool
    budget: BudgetReport

    def to_record(self):
        return {
            "n_users": self.n_users,
            "feasible": self.feasible,
            "assignments": [a.to_record() for a in self.assignments],
            "per_user_teeth": {str(u): list(v) for u, v in self.per_user_teeth.items()},
            "budget": {
                "pairs_needed": self.budget.pairs_needed,
                "pairs_available": self.budget.pairs_available,
                "k_max": self.budget.k_max,
                "usable_magnitudes": list(self.budget.usable_magnitudes),
                "feasible": self.budget.feasible,
                "limiting_constraint": self.budget.limiting_constraint,
                "lo_branches_per_pair": self.budget.lo_branches_per_pair,
                "lo_branches_shared": self.budget.lo_branches_shared,
            },
        }


def pair_budget(spec, opo=None, seed=None):
    """Count the EPR instances the hardware budget admits.

    Magnitudes are capped by the double-sideband modulation bandwidth
    (LO generation) and by half the down-conversion bandwidth; teeth
    whose technical-noise cleanliness exceeds the threshold are excluded
    when an OPO/seed model is supplied.  Raises InfeasibleSpacing when
    the comb spacing is below the waveshaper's minimum demultiplexing
    interval.
    """
    if spec.fsr_hz < spec.ws_min_spacing_hz:
        raise InfeasibleSpacing(
            f"comb spacing {spec.fsr_hz} Hz is below the waveshaper minimum "
            f"{spec.ws_min_spacing_hz} Hz")
    k_mod = math.floor(spec.mod_bandwidth_hz / spec.fsr_hz)
    k_comb = math.floor((spec.comb_bandwidth_hz / 2.0) / spec.fsr_hz)
    k_max = min(k_mod, k_comb)
    usable = []
    for n in range(1, k_max + 1):
        if opo is not None and seed is not None:
            if sideband_cleanliness(opo, seed, n) > spec.noise_clean_threshold:
                continue
        usable.append(n)
    pairs_needed = spec.n_users * (spec.n_users - 1) // 2
    pairs_available = 2 * len(usable)
    if pairs_available >= pairs_needed:
        limiting = "none"
    elif len(usable) < k_max:
        limiting = "noise_cleanliness"
    elif k_mod < k_comb:
        limiting = "mod_bandwidth"
    elif k_comb < k_mod:
        limiting = "comb_bandwidth"
    else:
        limiting = "bandwidth"
    return BudgetReport(
        pairs_needed=pairs_needed,
        pairs_available=pairs_available,
        k_max=k_max,
        usable_magnitudes=tuple(usable),
        feasible=pairs_available >= pairs_needed,
        limiting_constraint=limiting,
        lo_branches_per_pair=pairs_needed,
        lo_branches_shared=(pairs_needed + 1) // 2,
    )


def allocate(spec, opo=None, seed=None):
    """Assign an EPR instance to every user pair.

    Deterministic backtracking over the edges of K_N in lexicographic
    order.  Tie-breaks: smallest magnitude first, orientation A before
    B, the lower-indexed user takes the -n tooth first.  The heterodyne
    reference defaults to the lower-indexed user of each pair.
    """
    budget = pair_budget(spec, opo=opo, seed=seed)
    if not budget.feasible:
        raise DomainError(
            f"budget infeasible: pairs_needed = {budget.pairs_needed} > "
            f"pairs_available = {budget.pairs_available}")
    edges = list(itertools.combinations(range(spec.n_users), 2))
    used = set()
    teeth = {u: set() for u in range(spec.n_users)}
    chosen = []

    def backtrack(index):
        if index == len(edges):
            return True
        lo, hi = edges[index]
        for n in budget.usable_magnitudes:
            for orientation in ORIENTATIONS:
                if (n, orientation) in used:
                    continue
                for lo_tooth in (-n, n):
                    hi_tooth = -lo_tooth
                    if lo_tooth in teeth[lo] or hi_tooth in teeth[hi]:
                        continue
                    signal_tooth = -n if orientation == "A" else n
                    signal_user = lo if lo_tooth == signal_tooth else hi
                    idler_user = hi if signal_user == lo else lo
                    used.add((n, orientation))
                    teeth[lo].add(lo_tooth)
                    teeth[hi].add(hi_tooth)
                    chosen.append(PairAssignment(
                        users=(lo, hi), magnitude=n, orientation=orientation,
                        signal_user=signal_user, idler_user=idler_user,
                        het_user=lo))
                    if backtrack(index + 1):
                        return True
                    chosen.pop()
                    used.discard((n, orientation))
                    teeth[lo].discard(lo_tooth)
                    teeth[hi].discard(hi_tooth)
        return False

    if not backtrack(0):
        raise AllocationFailed(
            f"no conflict-free assignment exists for n_users = {spec.n_users} "
            f"with magnitudes {budget.usable_magnitudes}")
    per_user = {u: tuple(sorted(teeth[u])) for u in range(spec.n_users)}
    return NetworkPlan(n_users=spec.n_users, assignments=tuple(chosen),
                       per_user_teeth=per_user, feasible=True, budget=budget)


def verify_plan(plan, spec):
    """Re-check every plan invariant from scratch.

    Independent of allocate(): recomputes the budget arithmetic, the
    expected pair coverage, instance exclusivity, per-user frequency
    distinctness and role consistency by direct enumeration.  Returns
    (ok, violations).
    """
    violations = []
    if spec.fsr_hz < spec.ws_min_spacing_hz:
        violations.append("comb spacing below waveshaper minimum interval")
    k_cap = min(int(spec.mod_bandwidth_hz // spec.fsr_hz),
                int((spec.comb_bandwidth_hz / 2.0) // spec.fsr_hz))

    expected_pairs = set()
    for i in range(spec.n_users):
        for j in range(i + 1, spec.n_users):
            expected_pairs.add((i, j))
    seen_pairs = []
    for a in plan.assignments:
        pair = tuple(sorted(a.users))
        seen_pairs.append(pair)
    for pair in expected_pairs:
        count = seen_pairs.count(pair)
        if count == 0:
            violations.append(f"uncovered user pair {pair}")
        elif count > 1:
            violations.append(f"user pair {pair} covered {count} times")
    for pair in set(seen_pairs) - expected_pairs:
        violations.append(f"unknown user pair {pair}")

    seen_instances = []
    for a in plan.assignments:
        instance = (a.magnitude, a.orientation)
        if instance in seen_instances:
            violations.append(
                f"EPR instance {instance} assigned to more than one pair")
        seen_instances.append(instance)
        if a.magnitude < 1:
            violations.append(f"pair {a.users}: tooth magnitude {a.magnitude} < 1")
        if a.magnitude > k_cap:
            violations.append(
                f"pair {a.users}: magnitude {a.magnitude} exceeds budget cap {k_cap}")
        if a.orientation not in ("A", "B"):
            violations.append(f"pair {a.users}: unknown orientation {a.orientation}")
        if sorted((a.signal_user, a.idler_user)) != sorted(a.users):
            violations.append(
                f"pair {a.users}: signal/idler users {a.signal_user},"
                f"{a.idler_user} do not match the pair")
        if a.het_user not in a.users:
            violations.append(
                f"pair {a.users}: heterodyne user {a.het_user} outside the pair")
        expected_signal = -a.magnitude if a.orientation == "A" else a.magnitude
        if a.signal_tooth != expected_signal:
            violations.append(
                f"pair {a.users}: signal tooth {a.signal_tooth} inconsistent "
                f"with orientation {a.orientation}")
        if a.idler_tooth != -expected_signal:
            violations.append(
                f"pair {a.users}: idler tooth {a.idler_tooth} inconsistent "
                f"with orientation {a.orientation}")

    received = {u: [] for u in range(spec.n_users)}
    for a in plan.assignments:
        for u in a.users:
            received[u].append(a.tooth_of(u))
    for u, toothlist in received.items():
        dupes = {t for t in toothlist if toothlist.count(t) > 1}
        for t in sorted(dupes):
            violations.append(f"user {u} frequency collision at {t}")
    for u, toothlist in received.items():
        recorded = plan.per_user_teeth.get(u)
        if recorded is not None and tuple(sorted(toothlist)) != tuple(sorted(recorded)):
            violations.append(
                f"user {u}: per-user tooth table {recorded} does not match "
                f"assignments {sorted(toothlist)}")
    return len(violations) == 0, violations


@dataclass(frozen=True)
class NetworkKeyRates:
    """Per-pair key-rate reports plus network-level aggregates."""
    reports: dict
    min_key_rate_bits: float
    median_key_rate_bits: float
    total_key_rate_bits: float
    all_secure: bool


def plan_keyrates(plan, distances_km, opo, seed, link, convention="standard",
                  het_overrides=None):
    """Evaluate the key rate of every assigned pair.

    distances_km maps each user to its fiber arm length from the central
    node; arm 1 of the link model is the signal path, arm 2 the idler
    path.  The covariance is relabeled so that mode A is the heterodyne
    user, which matters because the protocol is not symmetric between
    the two sides.  het_overrides may move the heterodyne role per pair.
    """
    het_overrides = het_overrides or {}
    reports = {}
    for a in sorted(plan.assignments, key=lambda x: x.users):
        for u in a.users:
            if u not in distances_km:
                raise DomainError(f"no distance given for user {u}")
        cm, _ = source_covariance(opo, seed, a.magnitude)
        cm = apply_source_loss(cm, link.eta1, link.eta2)
        arm_link = LinkParams(
            eta1=link.eta1, eta2=link.eta2,
            L1_km=distances_km[a.signal_user], L2_km=distances_km[a.idler_user],
            alpha_db_per_km=link.alpha_db_per_km,
            eps1=link.eps1, eps2=link.eps2,
            eta_det=link.eta_det, v_el=link.v_el, eta_ws=link.eta_ws,
            beta=link.beta)
        cm = received_covariance(cm, arm_link)
        het_user = het_overrides.get(a.users, a.het_user)
        if het_user not in a.users:
            raise DomainError(
                f"heterodyne override {het_user} outside pair {a.users}")
        if het_user == a.idler_user:
            cm = cm.with_modes_swapped()
        reports[a.users] = key_rate(cm, link.beta, convention)
    rates = [r.key_rate_bits for r in reports.values()]
    return NetworkKeyRates(
        reports=reports,
        min_key_rate_bits=min(rates),
        median_key_rate_bits=statistics.median(rates),
        total_key_rate_bits=sum(rates),
        all_secure=all(r.secure for r in reports.values()),
    )
