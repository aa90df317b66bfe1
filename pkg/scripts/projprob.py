#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
projprob.py
CLI: amostras, grades de densidade, comparação MC x analítico e curvas de condutância.

Uso:
  python scripts/projprob.py sample --ensemble unitary -N 4 -K 2 -R 2 --draws 1000 --seed 7
  python scripts/projprob.py density --ensemble orthogonal -N 4 -K 2 --grid 101
  python scripts/projprob.py density --preset large
  python scripts/projprob.py compare --ensemble unitary -N 4 -K 2 -R 2 --draws 1000000 --bins 50
  python scripts/projprob.py conductance --ensemble unitary -N 4 -K 2 --draws 1000000

Saídas: CSV com cabeçalho "# chave: valor" ou JSON {"metadata", "columns", "rows"}.
Padrão: outputs/<comando>_<ensemble>_N<N>_K<K>.<fmt>; --out - escreve no stdout.

Códigos de saída: 0 ok/aceito, 1 rejeitado pelo χ², 2 uso inválido, 3 falha numérica.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from analytic import onepoint_density
from common import (
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_REJECT,
    EXIT_USAGE,
    SingularityError,
    UnsupportedDimensionError,
    __version__,
    load_settings,
    log,
    write_json,
    write_table,
)
from conductance import (
    conductance_density,
    p_g_closed_42,
    p_g_monte_carlo,
    support_max,
    weighted_conductance_monte_carlo,
)
from densities import density_auto, density_grid
from montecarlo import compare, estimate_joint, map_chunks
from sampling import (
    EnsembleKind,
    ProjectionConfig,
    partial_conductances_batch,
    projection_probs_batch,
)

PRESETS = {
    "small": [(EnsembleKind.UNITARY, 4, 2), (EnsembleKind.ORTHOGONAL, 4, 2)],
    "large": [(EnsembleKind.UNITARY, 6, 2), (EnsembleKind.ORTHOGONAL, 12, 3)],
}

# campos de RunConfig que cada comando usa e grava no cabeçalho
METADATA_FIELDS = {
    "sample": ("ensemble", "N", "K", "R", "draws", "seed", "threads", "with_g"),
    "density": ("ensemble", "N", "K", "grid", "tolerance", "eps_ts", "threads", "preset"),
    "compare": ("ensemble", "N", "K", "R", "draws", "bins", "seed", "threads", "tolerance", "eps_ts",
                "p_threshold", "analytic_K"),
    "conductance": ("ensemble", "N", "K", "draws", "bins", "grid", "seed", "threads", "tolerance", "eps_ts",
                    "weights"),
}


@dataclass
class RunConfig:
    command: str
    ensemble: EnsembleKind
    N: Optional[int]
    K: Optional[int]
    R: int
    draws: int
    bins: int
    seed: int
    grid: int
    tolerance: float
    eps_ts: float
    p_threshold: float
    out: Optional[str]
    fmt: str
    threads: int
    verbose: bool = False
    preset: Optional[str] = None
    analytic_K: Optional[int] = None
    weights: Optional[List[float]] = None
    with_g: bool = False
    argv: List[str] = field(default_factory=list)

    def validate(self):
        if self.command == "density" and self.preset:
            return
        if self.N is None or self.K is None:
            raise ValueError("informe -N e -K")
        ProjectionConfig(self.N, self.K, self.R)
        if self.draws < 1:
            raise ValueError(f"--draws deve ser >= 1 (recebido {self.draws})")
        if self.bins < 2:
            raise ValueError(f"--bins deve ser >= 2 (recebido {self.bins})")
        if self.grid < 2:
            raise ValueError(f"--grid deve ser >= 2 (recebido {self.grid})")
        if self.threads < 1:
            raise ValueError(f"--threads deve ser >= 1 (recebido {self.threads})")

    def metadata(self) -> Dict[str, Any]:
        meta = {"command_line": shlex.join(["projprob.py", *self.argv]), "version": __version__,
                "command": self.command, "fmt": self.fmt}
        for k in METADATA_FIELDS[self.command]:
            v = getattr(self, k)
            meta[k] = v.value if isinstance(v, EnsembleKind) else v
        return meta

    def output_path(self, settings_outdir: str) -> str:
        if self.out:
            return self.out
        if self.preset:
            name = f"{self.command}_preset_{self.preset}.{self.fmt}"
        else:
            name = f"{self.command}_{self.ensemble.value}_N{self.N}_K{self.K}.{self.fmt}"
        return str(Path(settings_outdir) / name)


# ================= Args =================

def _weights(raw: str) -> List[float]:
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"pesos inválidos: {raw!r} (use p1,p2,...)")


def parse_args(argv: Optional[Sequence[str]] = None, settings=None) -> argparse.Namespace:
    settings = settings or load_settings()

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ensemble", default="unitary", choices=[e.value for e in EnsembleKind],
                        help="orthogonal (O(N)) ou unitary (U(N))")
    common.add_argument("-N", type=int, default=None, help="Dimensão da matriz")
    common.add_argument("-K", type=int, default=None, help="Dimensão do subespaço projetado")
    common.add_argument("--seed", type=int, default=settings.seed, help="Semente do gerador (PCG64)")
    common.add_argument("--out", default=None, help="Arquivo de saída ('-' = stdout)")
    common.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    common.add_argument("--threads", type=int, default=settings.threads, help="Workers para MC e grades")
    common.add_argument("--tolerance", type=float, default=settings.quad_tol,
                        help="Tolerância absoluta das quadraturas")
    common.add_argument("--eps-ts", type=float, default=settings.eps_ts,
                        help="Faixa |t1+t2-1| tratada como quase singular")
    common.add_argument("--verbose", action="store_true", help="Logs detalhados")

    p = argparse.ArgumentParser(prog="projprob.py", description="Probabilidades de projeção de matrizes de Haar")
    p.add_argument("--version", action="version", version=f"projprob {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="Sorteia t_1..t_R")
    s.add_argument("-R", type=int, default=1)
    s.add_argument("--draws", type=int, default=1000)
    s.add_argument("--with-g", action="store_true", help="Inclui a condutância g por sorteio")

    d = sub.add_parser("density", parents=[common], help="Tabela da densidade de dois pontos")
    d.add_argument("--grid", type=int, default=101, help="Pontos por eixo (pontos médios)")
    d.add_argument("--preset", choices=sorted(PRESETS), default=None,
                   help="small: (U,4,2)+(O,4,2); large: (U,6,2)+(O,12,3)")

    c = sub.add_parser("compare", parents=[common], help="χ² do histograma MC contra a densidade analítica")
    c.add_argument("-R", type=int, default=2, choices=[1, 2])
    c.add_argument("--draws", type=int, default=1_000_000)
    c.add_argument("--bins", type=int, default=50)
    c.add_argument("--analytic-K", type=int, default=None, help="K do lado analítico (teste de poder)")
    c.add_argument("--p-threshold", type=float, default=settings.p_threshold)

    g = sub.add_parser("conductance", parents=[common], help="Curva p(g)")
    g.add_argument("--draws", type=int, default=1_000_000)
    g.add_argument("--bins", type=int, default=100)
    g.add_argument("--grid", type=int, default=101, help="Pontos de g em [0, min(K,N-K)]")
    g.add_argument("--weights", type=_weights, default=None, help="Ocupações p_1,...,p_{N-K}")

    return p.parse_args(argv)


def build_config(args: argparse.Namespace, argv: Sequence[str]) -> RunConfig:
    R = getattr(args, "R", 2 if args.command == "density" else 1)
    if args.command == "conductance":
        R = 1
    cfg = RunConfig(
        command=args.command,
        ensemble=EnsembleKind.parse(args.ensemble),
        N=args.N,
        K=args.K,
        R=R,
        draws=getattr(args, "draws", 1),
        bins=getattr(args, "bins", 2),
        seed=args.seed,
        grid=getattr(args, "grid", 2),
        tolerance=args.tolerance,
        eps_ts=args.eps_ts,
        p_threshold=getattr(args, "p_threshold", 0.0),
        out=args.out,
        fmt=args.fmt,
        threads=args.threads,
        verbose=args.verbose,
        preset=getattr(args, "preset", None),
        analytic_K=getattr(args, "analytic_K", None),
        weights=getattr(args, "weights", None),
        with_g=getattr(args, "with_g", False),
        argv=list(argv),
    )
    cfg.validate()
    return cfg


# ================= Comandos =================

def cmd_sample(cfg: RunConfig) -> pd.DataFrame:
    cols = [f"t{i + 1}" for i in range(cfg.R)]

    def observable(frames):
        t = projection_probs_batch(frames, cfg.K, cfg.R)
        if cfg.with_g:
            g = partial_conductances_batch(frames, cfg.K).sum(axis=1)
            return np.column_stack([t, g])
        return t

    log(f"➡️ Sorteando {cfg.draws} matrizes {cfg.ensemble.value} N={cfg.N}", cfg.verbose)
    rows = np.concatenate(map_chunks(cfg.ensemble, cfg.N, cfg.draws, cfg.seed, cfg.threads, observable))
    return pd.DataFrame(rows, columns=cols + (["g"] if cfg.with_g else []))


def cmd_density(cfg: RunConfig) -> pd.DataFrame:
    if cfg.preset:
        frames = []
        for ens, N, K in PRESETS[cfg.preset]:
            df = density_grid(ens, N, K, cfg.grid, cfg.threads, cfg.eps_ts, cfg.tolerance, cfg.verbose)
            df.insert(0, "K", K)
            df.insert(0, "N", N)
            df.insert(0, "ensemble", ens.value)
            frames.append(df)
        return pd.concat(frames, ignore_index=True)
    return density_grid(cfg.ensemble, cfg.N, cfg.K, cfg.grid, cfg.threads, cfg.eps_ts, cfg.tolerance, cfg.verbose)


def analytic_evaluator(cfg: RunConfig):
    K = cfg.analytic_K or cfg.K
    ProjectionConfig(cfg.N, K, cfg.R)
    if cfg.R == 1:
        return lambda t: onepoint_density(cfg.ensemble, cfg.N, K, t).value
    ProjectionConfig(cfg.N, K, 2).require_analytic(cfg.ensemble)
    return lambda t1, t2: density_auto(cfg.ensemble, cfg.N, K, t1, t2, cfg.eps_ts, cfg.tolerance).value


def cmd_compare(cfg: RunConfig):
    evaluate = analytic_evaluator(cfg)
    hist = estimate_joint(cfg.ensemble, cfg.N, cfg.K, cfg.R, cfg.draws, cfg.bins, cfg.seed,
                          cfg.threads, cfg.verbose)
    strip = cfg.eps_ts if (cfg.ensemble is EnsembleKind.ORTHOGONAL and cfg.R == 2) else 0.0
    report = compare(hist, evaluate, exclude_strip=strip)
    accepted = report.accepted(cfg.p_threshold)
    log(f"{'✅' if accepted else '❌'} χ²={report.chi2:.4g} dof={report.dof} p={report.p_value:.4g} "
        f"sup={report.sup_norm:.4g}", cfg.verbose)
    return report, accepted


def cmd_conductance(cfg: RunConfig) -> pd.DataFrame:
    hi = 1.0 if cfg.weights else float(support_max(cfg.N, cfg.K))
    g = np.linspace(0.0, hi, cfg.grid)
    df = pd.DataFrame({"g": g})

    if not cfg.weights:
        if (cfg.ensemble, cfg.N, cfg.K) == (EnsembleKind.UNITARY, 4, 2):
            df["p_closed"] = [p_g_closed_42(x) for x in g]
        try:
            conv = []
            for x in g:
                try:
                    conv.append(conductance_density(cfg.ensemble, cfg.N, cfg.K, x, cfg.eps_ts, cfg.tolerance))
                except SingularityError:
                    conv.append(np.nan)
            df["p_convolution"] = conv
        except UnsupportedDimensionError as e:
            log(f"⚠️ sem coluna de convolução: {e}", cfg.verbose)

    if cfg.weights:
        mc = weighted_conductance_monte_carlo(cfg.ensemble, cfg.N, cfg.K, cfg.weights, cfg.draws,
                                              cfg.bins, cfg.seed, cfg.threads)
    else:
        mc = p_g_monte_carlo(cfg.ensemble, cfg.N, cfg.K, cfg.draws, cfg.bins, cfg.seed, cfg.threads, cfg.verbose)
    df["p_mc"] = mc.evaluate(g)
    df.attrs["moments"] = {k: mc.metadata[k] for k in ("mean", "var", "se")}
    return df


# ================= Main =================

def run(cfg: RunConfig, settings) -> int:
    meta = cfg.metadata()
    out = cfg.output_path(settings.outdir)

    if cfg.command == "sample":
        write_table(cmd_sample(cfg), meta, out, cfg.fmt, cfg.verbose)
        return EXIT_OK

    if cfg.command == "density":
        write_table(cmd_density(cfg), meta, out, cfg.fmt, cfg.verbose)
        return EXIT_OK

    if cfg.command == "compare":
        report, accepted = cmd_compare(cfg)
        row = dict(report.to_dict(), accepted=accepted, p_threshold=cfg.p_threshold)
        meta.update(row)
        table = pd.DataFrame([row])
        if cfg.fmt == "json":
            payload = {"metadata": meta, "columns": list(table.columns), "rows": [row], **row}
            write_json(payload, out, cfg.verbose)
        else:
            write_table(table, meta, out, cfg.fmt, cfg.verbose)
        return EXIT_OK if accepted else EXIT_REJECT

    if cfg.command == "conductance":
        df = cmd_conductance(cfg)
        meta.update(df.attrs.get("moments", {}))
        write_table(df, meta, out, cfg.fmt, cfg.verbose)
        return EXIT_OK

    raise ValueError(f"comando desconhecido: {cfg.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        settings = load_settings()
        args = parse_args(argv, settings)
        cfg = build_config(args, argv)
        return run(cfg, settings)
    except SystemExit as e:
        # argparse: --help/--version saem com 0, erro de uso com 2
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    except ArithmeticError as e:
        print(f"❌ falha numérica: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
