#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
common.py
Peças compartilhadas por todos os módulos do projprob.

  - exceções (uma classe por tipo de falha, derivadas de ValueError / ArithmeticError)
  - helpers log / warn
  - configuração via ambiente (.env com python-dotenv)
  - escrita CSV / JSON com cabeçalho de proveniência
"""

from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv

__version__ = "0.3.0"

# ================= Defaults =================

DEFAULT_EPS_TS = 1e-3          # strip around t1+t2=1 (orthogonal line singularity)
DEFAULT_QUAD_TOL = 1e-10       # absolute target of the s-integrals
DEFAULT_P_THRESHOLD = 1e-3     # compare: accept iff p_value >= threshold
DEFAULT_SEED = 20150601
CHUNK_DRAWS = 50_000           # draws per RNG stream
MAX_BINS_TOTAL = 10**7
FLOAT_FORMAT = "%.17g"

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


# ================= Errors =================

class InvalidDimensionError(ValueError):
    pass


class InvalidWeightsError(ValueError):
    pass


class DomainError(ValueError):
    pass


class BoundaryError(DomainError):
    pass


class UnsupportedDimensionError(ValueError):
    pass


class UnsupportedParityError(UnsupportedDimensionError):
    pass


class TooManyBinsError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


class SingularityError(ArithmeticError):
    pass


class NearSingularityError(SingularityError):
    pass


# ================= Log =================

def log(msg: str, verbose: bool = True):
    if verbose:
        print(msg, flush=True)


def warn(msg: str):
    print(f"⚠️ {msg}", file=sys.stderr, flush=True)


def ensure_dir(p: Path):
    p.mkdir(parents=True, exist_ok=True)


# ================= Settings =================

@dataclass(frozen=True)
class Settings:
    seed: int = DEFAULT_SEED
    threads: int = 1
    eps_ts: float = DEFAULT_EPS_TS
    quad_tol: float = DEFAULT_QUAD_TOL
    p_threshold: float = DEFAULT_P_THRESHOLD
    outdir: str = "outputs"


def _env(name: str, cast, default):
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ValueError(f"{name}={raw!r} não é um valor válido")


def load_settings(dotenv_path: Optional[str] = None) -> Settings:
    """
    Lê .env (se existir) e as variáveis PROJPROB_*; o que não estiver definido fica no default.
    """
    load_dotenv(dotenv_path, override=False)
    return Settings(
        seed=_env("PROJPROB_SEED", int, DEFAULT_SEED),
        threads=max(1, _env("PROJPROB_THREADS", int, 1)),
        eps_ts=_env("PROJPROB_EPS_TS", float, DEFAULT_EPS_TS),
        quad_tol=_env("PROJPROB_QUAD_TOL", float, DEFAULT_QUAD_TOL),
        p_threshold=_env("PROJPROB_P_THRESHOLD", float, DEFAULT_P_THRESHOLD),
        outdir=_env("PROJPROB_OUTDIR", str, "outputs"),
    )


# ================= Output =================

def json_compat(obj: Any):
    """
    Converte numpy / NaN / inf para tipos aceitos por JSON.
    """
    if isinstance(obj, dict):
        return {str(k): json_compat(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_compat(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [json_compat(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def metadata_lines(metadata: Dict[str, Any]) -> str:
    out = []
    for k, v in metadata.items():
        if isinstance(v, (dict, list, tuple)):
            v = json.dumps(json_compat(v), ensure_ascii=False, sort_keys=True)
        out.append(f"# {k}: {v}\n")
    return "".join(out)


def render_table(df: pd.DataFrame, metadata: Dict[str, Any], fmt: str) -> str:
    if fmt == "csv":
        return metadata_lines(metadata) + df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if fmt == "json":
        payload = {
            "metadata": json_compat(metadata),
            "columns": list(map(str, df.columns)),
            "rows": json_compat(df.to_dict(orient="records")),
        }
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    raise ValueError(f"Formato inválido: {fmt} (use csv ou json)")


def write_text(text: str, out: str, verbose: bool = False) -> Optional[Path]:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return None
    path = Path(out)
    ensure_dir(path.parent)
    path.write_text(text, encoding="utf-8")
    log(f"📝 Arquivo salvo: {path}", verbose)
    return path


def write_table(df: pd.DataFrame, metadata: Dict[str, Any], out: str, fmt: str, verbose: bool = False) -> Optional[Path]:
    return write_text(render_table(df, metadata, fmt), out, verbose)


def write_json(payload: Dict[str, Any], out: str, verbose: bool = False) -> Optional[Path]:
    text = json.dumps(json_compat(payload), ensure_ascii=False, indent=2) + "\n"
    return write_text(text, out, verbose)
