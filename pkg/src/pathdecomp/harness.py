"""Batch classification and verification suites with JSON-lines reports."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Callable, Iterable, Iterator

from .canon import graph_id
from .decomposition import GallaiStatus, PathDecomposition, gallai_status, is_valid, parity_ok
from .family import complete_to_family_g, in_family_g, verify_family_g_witness
from .formats import emit_graph6, parse_graph6
from .generators import (
    clique_minus_matching,
    embed_as_even_subgraph,
    enumerate_connected,
    figure1_family,
    random_set_graph,
)
from .graph import SimpleGraph, even_subgraph, is_connected, is_odd_semi_clique, norm_edge
from .oracle import brute_force_pn
from .seteset import classify_eset, classify_set
from .solver import DEFAULT_TIMEOUT_MS, pn_exact
from .transforms import (
    addible_half_fan4,
    addible_single_fan2,
    fan2_precondition,
    is_induced_matching,
    lift_induced_matching,
    verify_transformation,
)

SCHEMA_VERSION = 1
# search nodes granted per millisecond of budget when running deterministically
NODES_PER_MS = 300

EXIT_CLEAN = 0
EXIT_VIOLATION = 2
EXIT_TIMEOUT = 3


@dataclass(frozen=True)
class Budget:
    timeout_ms: int | None = DEFAULT_TIMEOUT_MS
    deterministic: bool = False
    family_vertices: int = 2
    family_edges: int = 6
    family_nodes: int = 200_000

    def solver_args(self) -> dict:
        if self.deterministic:
            limit = None if self.timeout_ms is None else self.timeout_ms * NODES_PER_MS
            return {"timeout_ms": None, "node_limit": limit}
        return {"timeout_ms": self.timeout_ms, "node_limit": None}


@dataclass
class ClassificationRecord:
    graph_id: str
    graph6: str
    n: int
    m: int
    pn: int
    pn_exact: bool
    lower_bound: int
    gallai_status: str
    is_odd_semi_clique: bool
    is_set: bool
    eset_kind: str
    ev_max_degree: int
    ev_in_family_g: str
    theorem31_applicable: bool
    theorem41_applicable: bool
    theorem_holds: bool | None
    witness: list = field(default_factory=list)
    timing_ms: float | None = None

    def to_json(self) -> dict:
        d = {"v": SCHEMA_VERSION}
        d.update(asdict(self))
        if d["timing_ms"] is None:
            del d["timing_ms"]
        return d


def ev_family_verdict(g: SimpleGraph, budget: Budget = Budget()) -> str:
    """``yes`` (already in G), ``witness-found``, ``no`` or ``unknown``."""
    ev = even_subgraph(g).ev_graph
    if in_family_g(ev):
        return "yes"
    res = complete_to_family_g(
        ev, budget.family_vertices, budget.family_edges, node_limit=budget.family_nodes
    )
    if res.found:
        assert verify_family_g_witness(ev, res.witness)
        return "witness-found"
    return "no" if res.status == "definite-no" else "unknown"


def classify(g: SimpleGraph, budget: Budget = Budget(), timing: bool = False) -> ClassificationRecord:
    t0 = time.perf_counter()
    res = pn_exact(g, **budget.solver_args())
    exact = not res.timed_out
    n = g.n
    status = gallai_status(n, res.pn) if n else GallaiStatus.GALLAI
    ev = even_subgraph(g)
    is_set = classify_set(g).is_set
    connected = n > 0 and is_connected(g)
    verdict = ev_family_verdict(g, budget)
    t31 = connected and ev.max_e_degree <= 3
    t41 = connected and verdict in ("yes", "witness-found")
    holds = None
    if (t31 or t41) and exact:
        holds = (status == GallaiStatus.GALLAI or is_set) and res.pn <= (n + 1) // 2
    rec = ClassificationRecord(
        graph_id=graph_id(g),
        graph6=emit_graph6(g),
        n=n,
        m=g.m,
        pn=res.pn,
        pn_exact=exact,
        lower_bound=res.best_lower_bound if res.timed_out else res.pn,
        gallai_status=status.value,
        is_odd_semi_clique=is_odd_semi_clique(g),
        is_set=is_set,
        eset_kind=classify_eset(g).kind.value,
        ev_max_degree=ev.max_e_degree,
        ev_in_family_g=verdict,
        theorem31_applicable=t31,
        theorem41_applicable=t41,
        theorem_holds=holds,
        witness=[list(p) for p in res.witness.canonical()],
    )
    if timing:
        rec.timing_ms = round((time.perf_counter() - t0) * 1000, 3)
    return rec


# ---------------------------------------------------------------- suites
#
# A suite is a stream of picklable jobs ``(suite, key, payload)``; each job
# is run by ``run_job`` and yields one report record.  Records carry a
# ``status`` of ``ok``, ``violation`` or ``timeout``.


@dataclass
class SuiteSummary:
    name: str
    processed: int = 0
    skipped: int = 0
    violations: int = 0
    timeouts: int = 0

    @property
    def exit_code(self) -> int:
        if self.violations:
            return EXIT_VIOLATION
        if self.timeouts:
            return EXIT_TIMEOUT
        return EXIT_CLEAN

    def line(self) -> str:
        return (
            f"{self.name}: processed={self.processed} skipped={self.skipped} "
            f"violations={self.violations} timeouts={self.timeouts}"
        )


def _base(suite: str, key: str, g: SimpleGraph | None) -> dict:
    d: dict = {"v": SCHEMA_VERSION, "suite": suite, "graph_id": key}
    if g is not None:
        d["graph6"] = emit_graph6(g)
    return d


def _ceil_half(n: int) -> int:
    return (n + 1) // 2


def _job_theorem31(key: str, g6: str, budget: Budget) -> dict:
    g = parse_graph6(g6)
    rec = classify(g, budget)
    d = _base("theorem31-sweep", key, g)
    d["record"] = rec.to_json()
    if not rec.pn_exact:
        d["status"] = "timeout"
    elif not rec.theorem31_applicable:
        d["status"] = "ok"
    else:
        d["status"] = "ok" if rec.theorem_holds else "violation"
    return d


def _job_gallai(key: str, g6: str, budget: Budget) -> dict:
    g = parse_graph6(g6)
    res = pn_exact(g, **budget.solver_args())
    d = _base("gallai-sweep", key, g)
    d.update(n=g.n, pn=res.pn, witness=[list(p) for p in res.witness.canonical()])
    if res.pn <= _ceil_half(g.n):
        d["status"] = "ok"
    else:
        d["status"] = "timeout" if res.timed_out else "violation"
    return d


def _job_theorem41(key: str, spec: tuple[str, int], budget: Budget) -> dict:
    kind, t = spec
    inst = figure1_family(kind, t)
    host = embed_as_even_subgraph(inst.pattern)
    witness_ok = bool(verify_family_g_witness(inst.pattern, inst.witness))
    ev_back = even_subgraph(host).ev_graph == inst.pattern
    rec = classify(host, budget)
    d = _base("theorem41-families", key, host)
    d.update(family=kind, t=t, witness_ok=witness_ok, ev_roundtrip=ev_back, record=rec.to_json())
    # an upper bound within ceil(n/2) settles the bound even without exactness
    bound_ok = rec.pn <= _ceil_half(host.n)
    dichotomy = rec.theorem_holds is not False
    ok = witness_ok and ev_back and rec.theorem41_applicable and bound_ok and dichotomy
    d["status"] = "ok" if ok else "violation"
    return d


def set_strong_ok(n: int, pn: int, semi: bool) -> bool:
    return pn <= n // 2 or (semi and pn == _ceil_half(n))


def _job_set_strong(key: str, g6: str, budget: Budget) -> dict:
    g = parse_graph6(g6)
    res = pn_exact(g, **budget.solver_args())
    semi = is_odd_semi_clique(g)
    d = _base("set-strong-check", key, g)
    d.update(n=g.n, pn=res.pn, pn_exact=not res.timed_out, odd_semi_clique=semi,
             is_set=classify_set(g).is_set, witness=[list(p) for p in res.witness.canonical()])
    if res.timed_out:
        d["lower_bound"] = res.best_lower_bound
        # the upper bound may already certify the Gallai side
        d["status"] = "ok" if res.pn <= g.n // 2 else "timeout"
    else:
        d["status"] = "ok" if d["is_set"] and set_strong_ok(g.n, res.pn, semi) else "violation"
    return d


def _job_oracle(key: str, g6: str, budget: Budget) -> dict:
    g = parse_graph6(g6)
    res = pn_exact(g, **budget.solver_args())
    bf = brute_force_pn(g)
    d = _base("oracle-eq", key, g)
    d.update(pn=res.pn, brute_force=bf)
    if res.timed_out:
        d["status"] = "timeout"
    else:
        d["status"] = "ok" if res.pn == bf else "violation"
    return d


def _job_transform(key: str, spec: tuple[str, int], budget: Budget) -> dict:
    kind, seed = spec
    d = _base("transform-contracts", key, None)
    d.update(kind=kind, seed=seed)
    inst = contract_instance(kind, seed)
    if inst is None:
        d["status"] = "skip"
        return d
    d["graph6"] = emit_graph6(inst["graph"])
    d["problems"] = check_contract(inst, budget)
    d["status"] = "violation" if d["problems"] else "ok"
    return d


JOB_RUNNERS: dict[str, Callable] = {
    "theorem31-sweep": _job_theorem31,
    "gallai-sweep": _job_gallai,
    "theorem41-families": _job_theorem41,
    "set-strong-check": _job_set_strong,
    "oracle-eq": _job_oracle,
    "transform-contracts": _job_transform,
}


def run_job(job: tuple[str, str, object, Budget]) -> dict:
    suite, key, payload, budget = job
    return JOB_RUNNERS[suite](key, payload, budget)


# ------------------------------------------------------- instance streams


def _enumerated(max_n: int) -> Iterator[SimpleGraph]:
    for n in range(1, max_n + 1):
        yield from enumerate_connected(n)


def set_instances(sizes: Iterable[int] = (5, 7, 9), per_size: int = 170, max_seed: int = 100_000) -> Iterator[tuple[str, SimpleGraph]]:
    """``per_size`` random SET graphs of each order, then the clique-minus-matching graphs.

    Repair can add vertices; outputs whose order is not the requested one
    are skipped so each size gets exactly ``per_size`` graphs.
    """
    for n in sizes:
        got = 0
        for seed in range(max_seed):
            if got == per_size:
                break
            g = random_set_graph(n - 3, seed % (n + 2), seed)
            if g.n != n:
                continue
            got += 1
            yield f"set:n{n}:s{seed}", g
    for k in range(1, 5):
        yield f"cmm:k{k}", clique_minus_matching(k)


def family_instances(max_edges: int = 10) -> Iterator[tuple[str, SimpleGraph]]:
    """Generated family graphs small enough for the brute-force oracle."""
    for k in range(1, 5):
        g = clique_minus_matching(k)
        if g.m <= max_edges:
            yield f"cmm:k{k}", g
    for n in (5, 7, 9):
        for seed in range(60):
            g = random_set_graph(n - 3, seed % 5, seed)
            if g.m <= max_edges:
                yield f"set:n{n}:s{seed}", g
    for kind, t in (("chain", 2), ("necklace", 3)):
        for stubs in (0, 1):
            g = figure1_family(kind, t, stubs).pattern
            if g.m <= max_edges:
                yield f"fig1:{kind}:{t}:{stubs}", g


def suite_jobs(name: str, params: dict, budget: Budget) -> Iterator[tuple[str, str, object, Budget]]:
    max_n = params.get("max_n", 6)
    if name in ("theorem31-sweep", "gallai-sweep"):
        for g in _enumerated(max_n):
            yield name, graph_id(g), emit_graph6(g), budget
    elif name == "oracle-eq":
        seen = set()
        for g in _enumerated(max_n):
            seen.add(graph_id(g))
            yield name, graph_id(g), emit_graph6(g), budget
        for label, g in family_instances(params.get("max_edges", 10)):
            if graph_id(g) not in seen:
                seen.add(graph_id(g))
                yield name, graph_id(g), emit_graph6(g), budget
    elif name == "set-strong-check":
        sizes = params.get("sizes", (5, 7, 9))
        for label, g in set_instances(sizes, params.get("per_size", 170)):
            yield name, label, emit_graph6(g), budget
    elif name == "theorem41-families":
        for kind, ts in (("chain", (2, 3, 4)), ("necklace", (3, 4))):
            for t in ts:
                yield name, f"fig1:{kind}:{t}", (kind, t), budget
    elif name == "transform-contracts":
        counts = params.get("counts", {"fan2": 1000, "fan4": 300, "matching": 300})
        for kind, want in counts.items():
            for seed in contract_seeds(kind, want):
                yield name, f"{kind}:{seed}", (kind, seed), budget
    else:
        raise KeyError(f"unknown suite {name!r}")


SUITES = tuple(JOB_RUNNERS)


def _done_keys(path: str, suite: str) -> set[str]:
    keys = set()
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn last line from an interrupted run
                if rec.get("suite") == suite:
                    keys.add(rec["graph_id"])
    except FileNotFoundError:
        pass
    return keys


def run_suite(
    name: str,
    params: dict | None = None,
    budget: Budget = Budget(),
    out: IO[str] | None = None,
    resume_from: str | None = None,
    workers: int = 1,
    on_record: Callable[[dict], None] | None = None,
) -> SuiteSummary:
    """Run a suite, writing one JSON line per job in input order.

    With ``resume_from``, jobs whose key already appears in that report are
    skipped.  ``workers > 1`` fans jobs out to processes; ``map`` keeps the
    output in input order.
    """
    params = params or {}
    done = _done_keys(resume_from, name) if resume_from else set()
    summary = SuiteSummary(name)
    jobs = []
    for job in suite_jobs(name, params, budget):
        if job[1] in done:
            summary.skipped += 1
        else:
            jobs.append(job)

    def consume(records: Iterable[dict]) -> None:
        for rec in records:
            if rec["status"] == "skip":
                continue
            summary.processed += 1
            if rec["status"] == "violation":
                summary.violations += 1
            elif rec["status"] == "timeout":
                summary.timeouts += 1
            if out is not None:
                out.write(json.dumps(rec, separators=(",", ":")) + "\n")
                out.flush()
            if on_record is not None:
                on_record(rec)

    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            consume(pool.map(run_job, jobs, chunksize=4))
    else:
        consume(map(run_job, jobs))
    return summary


# --------------------------------------------------- transformation contracts


def _random_graph(rng: random.Random, n_lo: int = 4, n_hi: int = 8) -> SimpleGraph:
    n = rng.randint(n_lo, n_hi)
    p = rng.uniform(0.3, 0.7)
    return SimpleGraph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])


def _min_decomposition(g: SimpleGraph) -> PathDecomposition:
    return pn_exact(g, timeout_ms=None).witness


def contract_instance(kind: str, seed: int) -> dict | None:
    """A random instance meeting the hypothesis of ``kind``, or ``None``.

    ``fan2``: an edge ``uv`` with ``D'(v)`` above the passing-neighbour count
    of ``u``.  ``fan4``: a vertex ``u`` and some of its edges, every
    neighbour of ``u`` ending a path.  ``matching``: an induced matching
    whose ``u_i`` have no passing neighbour and whose ``v_i`` end paths.
    """
    rng = random.Random(f"{kind}:{seed}")
    g = _random_graph(rng)
    if g.m == 0:
        return None
    if kind == "fan2":
        u, v = rng.choice(g.edges)
        if rng.random() < 0.5:
            u, v = v, u
        d = _min_decomposition(g.remove_edges([(u, v)]))
        if not fan2_precondition(g, (u, v), d):
            return None
        return {"kind": kind, "graph": g, "edge": (u, v), "before": d}
    if kind == "fan4":
        u = max(range(g.n), key=lambda v: (g.degree(v), rng.random()))
        inc = g.incident_edges(u)
        lo = min(2, len(inc))
        h = sorted(rng.sample(inc, rng.randint(lo, len(inc))))
        d = _min_decomposition(g.remove_edges(h))
        if any(d.D(w) < 1 for w in g.neighbors(u)):
            return None
        return {"kind": kind, "graph": g, "pivot": u, "h": h, "x": rng.choice(h), "before": d}
    if kind == "matching":
        g = _random_graph(rng, 6, 9)
        edges = list(g.edges)
        rng.shuffle(edges)
        chosen: list = []
        for e in edges:
            if is_induced_matching(g, chosen + [e]):
                chosen.append(e)
        # drop pairs until every remaining one meets the hypothesis
        while chosen:
            g_prime = g.remove_edges(chosen)
            d = _min_decomposition(g_prime)
            pairs, dropped = [], None
            for a, b in chosen:
                fits = [
                    (x, y) for x, y in ((a, b), (b, a))
                    if d.D(y) >= 1 and all(d.D(w) for w in g_prime.neighbors(x))
                ]
                if not fits:
                    dropped = (a, b)
                    break
                pairs.append(rng.choice(fits))
            if dropped is None:
                return {"kind": kind, "graph": g, "pairs": pairs, "before": d}
            chosen.remove(dropped)
        return None
    raise KeyError(f"unknown contract kind {kind!r}")


def contract_seeds(kind: str, want: int, limit: int = 200_000) -> list[int]:
    seeds = []
    for seed in range(limit):
        if contract_instance(kind, seed) is not None:
            seeds.append(seed)
            if len(seeds) == want:
                break
    return seeds


def check_contract(inst: dict, budget: Budget = Budget()) -> list[str]:
    """Contract failures for one instance; empty when the guaranteed transformation exists."""
    g = inst["graph"]
    d = inst["before"]
    t = budget.timeout_ms
    try:
        if inst["kind"] == "fan2":
            cert = addible_single_fan2(g, inst["edge"], d, t)
            if cert is None:
                return ["precondition held but no certificate"]
            return verify_transformation(cert)
        if inst["kind"] == "fan4":
            h = inst["h"]
            a, cert = addible_half_fan4(g, inst["pivot"], h, inst["x"], d, t)
            probs = verify_transformation(cert)
            if norm_edge(*inst["x"]) not in a:
                probs.append("x not in A")
            if len(a) < _ceil_half(len(h)):
                probs.append(f"|A| = {len(a)} below ceil({len(h)}/2)")
            return probs
        pairs = inst["pairs"]
        out = lift_induced_matching(g, pairs, d, t)
        probs = []
        if not is_valid(g, out) or not parity_ok(g, out):
            probs.append("lifted decomposition invalid")
        if len(out) != len(d):
            probs.append("path count changed")
        moved = {}
        for a, b in pairs:
            moved[a] = d.D(a) + 1
            moved[b] = d.D(b) - 1
        for w in range(g.n):
            want = moved.get(w, d.D(w))
            if out.D(w) != want:
                probs.append(f"D({w}) = {out.D(w)}, expected {want}")
        return probs
    except AssertionError as exc:
        return [f"contract bug: {exc}"]
