"""Adversarial branching families that defeat every deterministic observer.

Built around an AdversarialCertificate: a real expanding eigenvalue
whose eigenvector reaches the breakpoint exactly, plus a reset input
returning the state to the origin afterwards. From these, a binary tree
of trajectory segments is constructed. Sibling branches share their
entire input segment and all output labels except the very last one, so
whatever a deterministic observer predicts at that final time, one
sibling contradicts it. Walking the tree one level per stage yields a
single infinite input/output behavior on which the observer errs at
every stage boundary.

Stage length T and the per-branch initial states come in closed form;
every quantity is a finite geometric sum in q = lambda^{-T}, making
exact verification possible at tree scale.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import find_adversarial_certificate
from .errors import (
    BudgetError,
    DomainError,
    FamilyContradictionError,
    HorizonSearchError,
    InapplicableError,
)
from .harness import interconnect
from .plant import resolve_budget, simulate

STAGE_LENGTH_CAP = 1000


def _finite_or_none(value):
    return float(value) if np.isfinite(value) else None


@dataclass(frozen=True)
class FamilyParams:
    """Closed-form ingredients of one adversarial family."""

    eigenvalue: float
    stage_length: int
    breakpoint: float
    breakpoint_state: tuple
    seed_state: tuple
    decay: float
    reset_input_index: int
    right_slack_at_breakpoint: float
    right_slack_after_reset: float

    def to_payload(self):
        return {
            "eigenvalue": self.eigenvalue,
            "stage_length": self.stage_length,
            "breakpoint": self.breakpoint,
            "breakpoint_state": list(self.breakpoint_state),
            "seed_state": list(self.seed_state),
            "decay": self.decay,
            "reset_input_index": self.reset_input_index,
            # infinite slack (no breakpoint above) serializes as null
            "right_slack_at_breakpoint": _finite_or_none(self.right_slack_at_breakpoint),
            "right_slack_after_reset": _finite_or_none(self.right_slack_after_reset),
        }


def _stage_conditions(lam, beta, delta1, delta2, T):
    """The five inequalities a stage length must satisfy.

    Growth must dominate the geometric pile-up of seed states (first,
    fourth, fifth) and the piled-up states must stay inside the same
    quantizer cells as their exact counterparts (second, third); an
    infinite slack makes its cell condition vacuous.
    """
    grow = lam**T
    conds = [grow > lam / (lam - 1.0), grow - 1.0 > 1.0, grow - 1.0 > lam]
    if np.isfinite(delta1):
        conds.append(beta / (1.0 - lam**-T) < beta + delta1)
    if np.isfinite(delta2):
        conds.append(lam * beta / (1.0 - lam**-T) < lam * beta + delta2)
    return all(conds)


def choose_stage_length(sys, cert, cap=STAGE_LENGTH_CAP):
    """Smallest stage length T >= 2 satisfying all five growth conditions."""
    lam = cert.eigenvalue
    beta = cert.breakpoint
    q1 = sys.quantizer.dims[0]
    delta1 = q1.right_slack(beta)
    du = float((sys.D @ sys.input_vector(cert.reset_input_index))[0])
    delta2 = q1.right_slack(lam * beta + du)
    for T in range(2, cap + 1):
        if _stage_conditions(lam, beta, delta1, delta2, T):
            return T
    raise HorizonSearchError(f"no stage length up to {cap} satisfies the "
                             "growth conditions")


def family_parameters(sys, cert=None, stage_length=None):
    """Assemble FamilyParams, locating the certificate if not supplied."""
    if cert is None:
        cert = find_adversarial_certificate(sys)
    if cert is None:
        raise InapplicableError(
            "no adversarial certificate: the family construction needs a "
            "real expanding eigenvalue reaching a breakpoint with a reset "
            "input"
        )
    lam = cert.eigenvalue
    beta = cert.breakpoint
    q1 = sys.quantizer.dims[0]
    delta1 = q1.right_slack(beta)
    du = float((sys.D @ sys.input_vector(cert.reset_input_index))[0])
    delta2 = q1.right_slack(lam * beta + du)
    if stage_length is None:
        T = choose_stage_length(sys, cert)
    else:
        T = int(stage_length)
        if T < 2 or not _stage_conditions(lam, beta, delta1, delta2, T):
            raise DomainError(
                f"stage length {T} violates the growth conditions for "
                f"eigenvalue {lam:.6g}"
            )
    x_star = np.asarray(cert.breakpoint_state, dtype=np.float64)
    s_o = x_star / lam**T
    return FamilyParams(
        eigenvalue=lam,
        stage_length=T,
        breakpoint=beta,
        breakpoint_state=tuple(float(x) for x in x_star),
        seed_state=tuple(float(x) for x in s_o),
        decay=lam**-T,
        reset_input_index=cert.reset_input_index,
        right_slack_at_breakpoint=delta1,
        right_slack_after_reset=delta2,
    )


# ---------------------------------------------------------------------------
# tree coordinates


def branch_bits(k, j):
    """Branch label of node (k, j): k bits of j-1, most significant first.

    Bit l chooses whether stage l added the seed-state term q^{l-1} s_o;
    the left child of any node appends a 0, the right child a 1.
    """
    k = int(k)
    j = int(j)
    if k < 1 or not 1 <= j <= 2**k:
        raise DomainError(f"node ({k}, {j}) outside the tree")
    return tuple((j - 1) >> (k - l) & 1 for l in range(1, k + 1))


def branch_index(bits):
    """Inverse of branch_bits: (k, j) for a bit tuple."""
    k = len(bits)
    if k < 1 or any(b not in (0, 1) for b in bits):
        raise DomainError("bits must be a non-empty 0/1 sequence")
    j = 1
    for b in bits:
        j = 2 * j - 1 + b
    return k, j


def initial_state(params, k, j):
    """Closed-form initial state of node (k, j): geometric sum of seeds."""
    bits = branch_bits(k, j)
    q = params.decay
    coeff = sum(b * q ** (l - 1) for l, b in enumerate(bits, start=1))
    return coeff * np.asarray(params.seed_state, dtype=np.float64)


def input_segment(sys, params, k, j):
    """Input indices of node (k, j): zeros with bit-selected resets.

    Length k*T + 1 (times 0..kT). The reset input is applied at
    t = l*T + 1 for l = 1..k-1 exactly when bit l is set: those are the
    branches whose state crossed the breakpoint at l*T and must be
    returned to the origin two steps later.
    """
    bits = branch_bits(k, j)
    zero = sys.zero_input_index()
    if zero is None:
        raise InapplicableError("family inputs need the zero input available")
    T = params.stage_length
    seg = np.full(k * T + 1, zero, dtype=np.int64)
    for l in range(1, k):
        if bits[l - 1]:
            seg[l * T + 1] = params.reset_input_index
    return seg


# ---------------------------------------------------------------------------
# building


@dataclass(frozen=True)
class FamilyNode:
    k: int
    j: int
    initial_state: np.ndarray
    input_indices: np.ndarray
    raw_outputs: np.ndarray
    outputs: np.ndarray

    def to_payload(self):
        return {
            "k": self.k,
            "j": self.j,
            "initial_state": [float(x) for x in self.initial_state],
            "input_indices": [int(i) for i in self.input_indices],
            "outputs": [[float(x) for x in row] for row in self.outputs],
        }


@dataclass(frozen=True)
class AdversarialFamily:
    params: FamilyParams
    depth: int
    nodes: dict

    def node(self, k, j):
        return self.nodes[(int(k), int(j))]

    def __len__(self):
        return len(self.nodes)

    def to_payload(self):
        return {
            "params": self.params.to_payload(),
            "depth": self.depth,
            "nodes": [self.nodes[key].to_payload()
                      for key in sorted(self.nodes)],
        }


def build_family(sys, params=None, depth=4, budget=None):
    """Simulate every node of the tree down to the requested depth."""
    depth = int(depth)
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if params is None:
        params = family_parameters(sys)
    T = params.stage_length
    total_steps = sum(2**k * (k * T + 1) for k in range(1, depth + 1))
    budget_eff = resolve_budget(budget)
    if total_steps > budget_eff:
        raise BudgetError(
            f"family of depth {depth} needs {total_steps} simulation steps, "
            f"budget {budget_eff}",
            required=total_steps,
            budget=budget_eff,
        )
    nodes = {}
    for k in range(1, depth + 1):
        for j in range(1, 2**k + 1):
            s = initial_state(params, k, j)
            seg = input_segment(sys, params, k, j)
            traj = simulate(sys, s, seg)
            nodes[(k, j)] = FamilyNode(
                k=k,
                j=j,
                initial_state=s,
                input_indices=seg,
                raw_outputs=traj.raw_outputs,
                outputs=traj.outputs,
            )
    return AdversarialFamily(params=params, depth=depth, nodes=nodes)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class FamilyVerification:
    """Violation lists for the three family properties, empty when sound.

    sibling_divergence: sibling pairs must share inputs, agree on all
    labels before kT, and split at kT with raw gap exactly the
    breakpoint height. prefix_extension: each node must extend its
    parent's labels. limit_consistency: deepest-level branches must
    reproduce every ancestor segment, and the all-right limit state must
    reproduce the all-right labels with a safe breakpoint margin.
    """

    sibling_divergence: tuple
    prefix_extension: tuple
    limit_consistency: tuple
    limit_margin: float

    @property
    def ok(self):
        return not (self.sibling_divergence or self.prefix_extension
                    or self.limit_consistency)

    def to_payload(self):
        return {
            "sibling_divergence": [list(v) for v in self.sibling_divergence],
            "prefix_extension": [list(v) for v in self.prefix_extension],
            "limit_consistency": [list(v) for v in self.limit_consistency],
            "limit_margin": self.limit_margin,
            "ok": self.ok,
        }


def _first_mismatch(a, b):
    """First row index where two label arrays differ, or None."""
    diff = np.any(a != b, axis=1)
    hits = np.flatnonzero(diff)
    return int(hits[0]) if hits.size else None


def verify_family(sys, family, margin_tol=1e-9):
    """Check the three family properties exhaustively at build depth."""
    params = family.params
    T = params.stage_length
    beta = params.breakpoint
    item_i = []
    item_ii = []
    item_iii = []

    for k in range(1, family.depth + 1):
        for i in range(1, 2**(k - 1) + 1):
            left = family.node(k, 2 * i - 1)
            right = family.node(k, 2 * i)
            if not np.array_equal(left.input_indices, right.input_indices):
                item_i.append((k, 2 * i, -1))
                continue
            t = _first_mismatch(left.outputs, right.outputs)
            if t != k * T:
                item_i.append((k, 2 * i, -1 if t is None else t))
                continue
            gap = float(np.linalg.norm(right.raw_outputs[k * T]
                                       - left.raw_outputs[k * T]))
            if abs(gap - beta) > 1e-9 * max(1.0, beta):
                item_i.append((k, 2 * i, k * T))

    for k in range(2, family.depth + 1):
        for j in range(1, 2**k + 1):
            child = family.node(k, j)
            parent = family.node(k - 1, (j + 1) // 2)
            L = (k - 1) * T + 1
            if not np.array_equal(child.input_indices[:L],
                                  parent.input_indices):
                item_ii.append((k, j, -1))
                continue
            t = _first_mismatch(child.outputs[:L], parent.outputs)
            if t is not None:
                item_ii.append((k, j, t))

    # Deepest-level branches are the finite truncations of eventually-left
    # paths; each must reproduce every ancestor's full segment exactly.
    K = family.depth
    for j in range(1, 2**K + 1):
        leaf = family.node(K, j)
        anc = j
        for k in range(K - 1, 0, -1):
            anc = (anc + 1) // 2
            node = family.node(k, anc)
            t = _first_mismatch(leaf.outputs[: k * T + 1], node.outputs)
            if t is not None:
                item_iii.append((k, j, t))

    # The all-right path has an infinite geometric limit state; its labels
    # must match every all-right node and stay clear of the breakpoints.
    q = params.decay
    s_inf = np.asarray(params.seed_state, dtype=np.float64) / (1.0 - q)
    seg = input_segment(sys, params, K, 2**K)
    traj = simulate(sys, s_inf, seg)
    margin = float(np.min(sys.quantizer.breakpoint_distances(traj.raw_outputs)))
    if margin < margin_tol:
        item_iii.append((K, 2**K, -1))
    for k in range(1, K + 1):
        node = family.node(k, 2**k)
        t = _first_mismatch(traj.outputs[: k * T + 1], node.outputs)
        if t is not None:
            item_iii.append((k, 2**k, t))

    return FamilyVerification(
        sibling_divergence=tuple(item_i),
        prefix_extension=tuple(item_ii),
        limit_consistency=tuple(item_iii),
        limit_margin=margin,
    )


# ---------------------------------------------------------------------------
# adversarial walk


@dataclass(frozen=True)
class AttackResult:
    """Outcome of the stage-by-stage walk against one observer design.

    path: the chosen (k, j) per stage. error_times: the times kT at which
    the observer's prediction provably disagreed. final_record: the full
    interconnection trace along the deepest chosen branch.
    """

    path: tuple
    error_times: tuple
    final_record: object

    def to_payload(self):
        return {
            "path": [list(node) for node in self.path],
            "error_times": list(self.error_times),
        }


def _replay_prediction_at(node, observer, t_check):
    """Drive a fresh observer along a node's segment; prediction at t_check."""
    captured = None
    for t in range(len(node.input_indices)):
        u = int(node.input_indices[t])
        pred = observer.predict(u)
        if t == t_check:
            captured = np.asarray(pred, dtype=np.float64)
            break
        observer.update(u, node.outputs[t])
    return captured


def adversarial_walk(sys, family, observer_factory):
    """Descend the tree, always taking the branch the observer gets wrong.

    At stage k both candidate siblings are replayed through fresh
    observer instances. They share every input and every label the
    observer has seen before time kT, so a deterministic observer makes
    the same prediction on both; since their labels at kT differ, at
    least one branch mismatches and is chosen (left preferred when both
    mismatch). A stage where neither mismatches means the observer is
    not deterministic or the family is invalid.
    """
    T = family.params.stage_length
    path = []
    error_times = []
    prev_j = 1
    for k in range(1, family.depth + 1):
        chosen = None
        for j in (2 * prev_j - 1, 2 * prev_j):
            node = family.node(k, j)
            pred = _replay_prediction_at(node, observer_factory(), k * T)
            if pred is None or not np.array_equal(pred, node.outputs[k * T]):
                chosen = j
                break
        if chosen is None:
            raise FamilyContradictionError(
                f"no sibling at stage {k} contradicts the observer; "
                "observer is non-deterministic or the family is invalid"
            )
        path.append((k, chosen))
        error_times.append(k * T)
        prev_j = chosen
    final = family.node(family.depth, prev_j)
    record = interconnect(sys, observer_factory(), final.initial_state,
                          final.input_indices)
    return AttackResult(
        path=tuple(path),
        error_times=tuple(error_times),
        final_record=record,
    )
