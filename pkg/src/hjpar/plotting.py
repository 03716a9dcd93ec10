"""Tables and figures for result files (certificates, witnesses, bounds)."""

from __future__ import annotations

import csv
import json
import os
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .colorings import Coloring  # noqa: E402

STYLE = {"figure.dpi": 120, "font.size": 9, "axes.grid": True, "grid.alpha": 0.3,
         "savefig.bbox": "tight", "svg.hashsalt": "hjpar"}


def _write_csv(path: str, header: list[str], rows: Iterable[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def certificate_figure(cert: dict, stem: str) -> list[str]:
    sizes = cert.get("sizes") or []
    _write_csv(stem + ".csv", ["n", "bad_coloring_found", "nodes", "prunes"],
               [[s["n"], int(s["bad"]), s["nodes"], s["prunes"]] for s in sizes])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4, 3))
        ns = [s["n"] for s in sizes]
        nodes = [max(1, s["nodes"]) for s in sizes]
        colors = ["tab:red" if s["bad"] else "tab:blue" for s in sizes]
        ax.bar(ns, nodes, color=colors)
        ax.set_yscale("log")
        ax.set_xlabel("size n")
        ax.set_ylabel("search nodes")
        ax.set_title(f"{cert['kind']} {cert['params']} = {cert.get('value')}")
        fig.savefig(stem + ".png")
        plt.close(fig)
    return [stem + ".csv", stem + ".png"]


def coloring_image(c: Coloring) -> np.ndarray:
    """Colors arranged as a 2-D array: low half of the positions by rows, high half by columns."""
    lo = c.length // 2
    return c.table.reshape(c.alphabet ** (c.length - lo), c.alphabet ** lo)


def witness_figure(data: dict, stem: str) -> list[str]:
    w = data.get("witness")
    col = data["coloring"]
    rows = [[k, json.dumps(v, sort_keys=True)] for k, v in sorted((w or {}).items())] \
        if isinstance(w, dict) else [["set", json.dumps(w)]]
    _write_csv(stem + ".csv", ["field", "value"], [["op", data["op"]]] + rows)
    out = [stem + ".csv"]
    if col.get("format") != "hjpar/coloring@1":
        return out
    c = Coloring.from_json(col)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4, 4))
        ax.imshow(coloring_image(c), cmap="tab10", vmin=0, vmax=9, interpolation="nearest")
        ax.grid(False)
        ax.set_xlabel("rank of the low positions")
        ax.set_ylabel("rank of the high positions")
        ax.set_title(f"{data['op']}: {'found' if w is not None else 'none'}")
        fig.savefig(stem + ".png")
        plt.close(fig)
    return out + [stem + ".png"]


def bound_figure(data: dict, stem: str) -> list[str]:
    _write_csv(stem + ".csv", ["kind", "exact", "digits", "text"],
               [[data["kind"], int(data["exact"]), data.get("digits"), data["text"]]])
    return [stem + ".csv"]


def report(paths: list[str], out_dir: str) -> list[str]:
    """Render each input and return one tab-delimited summary line per input."""
    os.makedirs(out_dir, exist_ok=True)
    lines = []
    for path in paths:
        with open(path) as fh:
            data = json.load(fh)
        stem = os.path.join(out_dir, os.path.splitext(os.path.basename(path))[0])
        fmt = data.get("format", "")
        if fmt == "hjpar/certificate@1" and "value" in data:
            files = certificate_figure(data, stem)
            summary = f"value={data['value']}"
        elif fmt == "hjpar/witness@1":
            files = witness_figure(data, stem)
            summary = "found" if data.get("witness") is not None else "none"
        elif fmt == "hjpar/bound@1":
            files = bound_figure(data, stem)
            summary = data["text"] if len(data["text"]) < 80 else data["text"][:77] + "..."
        else:
            files = []
            summary = f"skipped: unknown format {fmt!r}"
        lines.append("\t".join([fmt or "-", path, summary, ",".join(files)]))
    return lines
