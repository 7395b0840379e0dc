"""Load-sweep experiment runner: config parsing, CSV output, comparison plots.

A sweep is the Cartesian product of algorithms x network sizes x message
sizes x offered loads x seeds.  The same seed produces identical arrival
streams for both algorithms at a given point, so per-seed differences
isolate the routing algorithm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .protocol import CircuitSwitchedSim, ProtocolParams
from .routing import bcra_path, enumerate_paths
from .topology import build_network
from .workload import DEFAULT_BANDWIDTH_BPS, TrafficParams, finalize

CSV_HEADER = "algorithm,N,msg_bytes,lambda,seed,sent,received,dropped,mean_delay_ns,throughput"

ALGORITHMS = ("dra", "bcra")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"config key '{key}': {message}")
        self.key = key


@dataclass(frozen=True)
class SimConfig:
    """One experiment point."""

    k: int
    algorithm: str
    msg_bytes: int
    lam: float
    seed: int
    setup_bytes: int = 32
    bandwidth_bps: int = DEFAULT_BANDWIDTH_BPS
    control_hop_latency_ps: int = 1000
    data_hop_latency_ps: int = 0
    retry_limit: int = 0
    retry_backoff_ps: int = 0
    warmup_fraction: float = 0.1
    messages_target: int = 10_000


@dataclass(frozen=True)
class RunRow:
    algorithm: str
    n: int
    msg_bytes: int
    lam: float
    seed: int
    sent: int
    received: int
    dropped: int
    mean_delay_ns: float | None
    throughput: float


@dataclass(frozen=True)
class SweepSpec:
    algorithms: tuple[str, ...]
    ks: tuple[int, ...]
    msg_bytes: tuple[int, ...]
    loads: tuple[float, ...]
    seeds: tuple[int, ...]
    base: SimConfig = field(
        default_factory=lambda: SimConfig(k=4, algorithm="dra", msg_bytes=64, lam=0.5, seed=1)
    )

    def points(self):
        for alg, k, mb, lam, seed in itertools.product(
            self.algorithms, self.ks, self.msg_bytes, self.loads, self.seeds
        ):
            yield replace(self.base, algorithm=alg, k=k, msg_bytes=mb, lam=lam, seed=seed)


def _parse_list(key: str, text: str, conv, validate=None):
    items = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            value = conv(part)
        except ValueError:
            raise ConfigError(key, f"cannot parse {part!r}") from None
        if validate is not None:
            validate(value)
        items.append(value)
    if not items:
        raise ConfigError(key, "empty value")
    return tuple(items)


def _parse_kv_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}", f"expected key = value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


_KNOWN_KEYS = {
    "algorithm", "k", "n", "msg_bytes", "load", "lambda", "seed",
    "setup_bytes", "bandwidth_gbps", "control_hop_latency_ns",
    "data_hop_latency_ns", "retry_limit", "retry_backoff_ns",
    "warmup_fraction", "messages_target",
}


def parse_config(path: str | None = None, overrides: dict[str, str] | None = None) -> SweepSpec:
    """Build a sweep from an optional key = value file; flags override the file."""
    values = _parse_kv_file(path) if path else {}
    values.update(overrides or {})
    for key in values:
        if key not in _KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
    if "k" in values and "n" in values:
        raise ConfigError("n", "give either k or n, not both")
    load_key = "load"
    if "lambda" in values:  # alias for load
        if "load" in values:
            raise ConfigError("lambda", "give either load or lambda, not both")
        load_key = "lambda"
        values["load"] = values.pop("lambda")

    def check_alg(a):
        if a not in ALGORITHMS:
            raise ConfigError("algorithm", f"must be one of {ALGORITHMS}, got {a!r}")

    def check_k(k):
        if not 1 <= k <= 16:
            raise ConfigError("k", f"must be in [1, 16], got {k}")

    algorithms = _parse_list("algorithm", values.get("algorithm", "dra"), str, check_alg)
    if "n" in values:
        ks = []
        for n in _parse_list("n", values["n"], int):
            if n < 2 or n & (n - 1):
                raise ConfigError("n", f"must be a power of two >= 2, got {n}")
            ks.append(n.bit_length() - 1)
        ks = tuple(ks)
    else:
        ks = _parse_list("k", values.get("k", "4"), int, check_k)

    def check_pos(key):
        def check(v):
            if v <= 0:
                raise ConfigError(key, f"must be positive, got {v}")
        return check

    def check_load(lam):
        if not 0.0 < lam <= 1.0:
            raise ConfigError(load_key, f"must be in (0, 1], got {lam}")

    msg_bytes = _parse_list("msg_bytes", values.get("msg_bytes", "64"), int, check_pos("msg_bytes"))
    loads = _parse_list(load_key, values.get("load", "0.5"), float, check_load)
    seeds = _parse_list("seed", values.get("seed", "1"), int)

    def scalar(key, conv, default, check=None):
        if key not in values:
            return default
        try:
            value = conv(values[key])
        except ValueError:
            raise ConfigError(key, f"cannot parse {values[key]!r}") from None
        if check is not None:
            check(value)
        return value

    def check_nonneg(key):
        def check(v):
            if v < 0:
                raise ConfigError(key, f"must be >= 0, got {v}")
        return check

    def check_warmup(v):
        if not 0.0 <= v < 1.0:
            raise ConfigError("warmup_fraction", f"must be in [0, 1), got {v}")

    base = SimConfig(
        k=ks[0],
        algorithm=algorithms[0],
        msg_bytes=msg_bytes[0],
        lam=loads[0],
        seed=seeds[0],
        setup_bytes=scalar("setup_bytes", int, 32, check_pos("setup_bytes")),
        bandwidth_bps=scalar(
            "bandwidth_gbps", lambda s: round(float(s) * 1e9), DEFAULT_BANDWIDTH_BPS,
            check_pos("bandwidth_gbps"),
        ),
        control_hop_latency_ps=scalar(
            "control_hop_latency_ns", lambda s: round(float(s) * 1000), 1000,
            check_nonneg("control_hop_latency_ns"),
        ),
        data_hop_latency_ps=scalar(
            "data_hop_latency_ns", lambda s: round(float(s) * 1000), 0,
            check_nonneg("data_hop_latency_ns"),
        ),
        retry_limit=scalar("retry_limit", int, 0, check_nonneg("retry_limit")),
        retry_backoff_ps=scalar(
            "retry_backoff_ns", lambda s: round(float(s) * 1000), 0,
            check_nonneg("retry_backoff_ns"),
        ),
        warmup_fraction=scalar("warmup_fraction", float, 0.1, check_warmup),
        messages_target=scalar("messages_target", int, 10_000, check_pos("messages_target")),
    )
    return SweepSpec(
        algorithms=algorithms, ks=ks, msg_bytes=msg_bytes, loads=loads, seeds=seeds, base=base
    )


def run_point(cfg: SimConfig) -> RunRow:
    net = build_network(cfg.k)
    traffic = TrafficParams(lam=cfg.lam, msg_bytes=cfg.msg_bytes, bandwidth_bps=cfg.bandwidth_bps)
    protocol = ProtocolParams(
        setup_bytes=cfg.setup_bytes,
        control_hop_latency_ps=cfg.control_hop_latency_ps,
        data_hop_latency_ps=cfg.data_hop_latency_ps,
        retry_limit=cfg.retry_limit,
        retry_backoff_ps=cfg.retry_backoff_ps,
    )
    sim = CircuitSwitchedSim(
        net,
        cfg.algorithm,
        traffic,
        protocol,
        master_seed=cfg.seed,
        messages_target=cfg.messages_target,
        warmup_fraction=cfg.warmup_fraction,
    )
    stats = sim.run()
    if not sim.all_links_free():
        raise RuntimeError(f"run did not drain: {len(sim.link_owner)} links still reserved")
    result = finalize(stats, cfg.lam)
    return RunRow(
        algorithm=cfg.algorithm,
        n=net.n,
        msg_bytes=cfg.msg_bytes,
        lam=cfg.lam,
        seed=cfg.seed,
        sent=result.sent,
        received=result.received,
        dropped=result.dropped,
        mean_delay_ns=None if result.mean_delay_ps is None else result.mean_delay_ps / 1000.0,
        throughput=result.throughput,
    )


def run_sweep(spec: SweepSpec) -> list[RunRow]:
    return [run_point(cfg) for cfg in spec.points()]


def format_row(row: RunRow) -> str:
    delay = "" if row.mean_delay_ns is None else f"{row.mean_delay_ns:.3f}"
    return (
        f"{row.algorithm},{row.n},{row.msg_bytes},{row.lam:g},{row.seed},"
        f"{row.sent},{row.received},{row.dropped},{delay},{row.throughput:.6f}"
    )


def write_csv(rows: list[RunRow], path: str) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(format_row(row) + "\n")


def read_csv(path: str) -> list[RunRow]:
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        for line in fh:
            f = line.strip().split(",")
            rows.append(RunRow(
                algorithm=f[0], n=int(f[1]), msg_bytes=int(f[2]), lam=float(f[3]),
                seed=int(f[4]), sent=int(f[5]), received=int(f[6]), dropped=int(f[7]),
                mean_delay_ns=float(f[8]) if f[8] else None, throughput=float(f[9]),
            ))
    return rows


def emit_plot(rows: list[RunRow], path: str) -> None:
    """Two-panel delay/throughput vs load chart; seeds at one point averaged."""
    if not rows:
        raise ValueError("no rows to plot")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    vary_n = len({r.n for r in rows}) > 1
    vary_mb = len({r.msg_bytes for r in rows}) > 1

    def series_key(row: RunRow):
        return (row.algorithm, row.n, row.msg_bytes)

    def label(key):
        alg, n, mb = key
        parts = [alg.upper()]
        if vary_n or not vary_mb:
            parts.append(f"{n}x{n}")
        if vary_mb or not vary_n:
            parts.append(f"{mb} B")
        return ", ".join(parts)

    grouped: dict[tuple, dict[float, list[RunRow]]] = {}
    for row in rows:
        grouped.setdefault(series_key(row), {}).setdefault(row.lam, []).append(row)

    fig, (ax_delay, ax_tput) = plt.subplots(1, 2, figsize=(11, 4.5))
    for key in sorted(grouped):
        loads = sorted(grouped[key])
        delays, tputs = [], []
        for lam in loads:
            pts = grouped[key][lam]
            with_delay = [p.mean_delay_ns for p in pts if p.mean_delay_ns is not None]
            delays.append(sum(with_delay) / len(with_delay) if with_delay else float("nan"))
            tputs.append(sum(p.throughput for p in pts) / len(pts))
        ax_delay.plot(loads, delays, marker="o", label=label(key))
        ax_tput.plot(loads, tputs, marker="o", label=label(key))
    ax_delay.set_xlabel("offered load")
    ax_delay.set_ylabel("mean ETE delay (ns)")
    ax_tput.set_xlabel("offered load")
    ax_tput.set_ylabel("throughput")
    for ax in (ax_delay, ax_tput):
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def paths_debug(k: int, src: int, dest: int) -> str:
    """Listing of every DRA-reachable path for (src, dest); BCRA path flagged."""
    net = build_network(k)
    if not 0 <= src < net.n:
        raise ValueError(f"src {src} out of range [0, {net.n})")
    if not 0 <= dest < net.n:
        raise ValueError(f"dest {dest} out of range [0, {net.n})")
    bcra_hops = bcra_path(net, src, dest).hops
    lines = []
    for path in enumerate_paths(net, src, dest):
        route = " ".join(f"R{sw},{st}" for (sw, st), _port in path.hops)
        flag = "  [bcra]" if path.hops == bcra_hops else ""
        lines.append(f"S{src} -> {route} -> D{dest}{flag}")
    return "\n".join(lines) + "\n"
