"""Output formats: CSV with 9 significant digits and self-contained static SVG plots."""

import csv
import math
from pathlib import Path

from .errors import ConfigurationError

SIG_DIGITS = 9


def fmt(value):
    """One CSV cell. None becomes an empty field; floats keep 9 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{SIG_DIGITS}g}"


def parse(cell):
    """Inverse of fmt for numeric cells; empty means None."""
    return None if cell == "" else float(cell)


def ensure_dir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot create output directory {path}: {exc}") from exc
    return path


def write_csv(path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path}: {exc}") from exc


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path}: {exc}") from exc


def svg_plot(path, x, series, xlabel, ylabel, title="", logx=False, logy=False):
    """Line plot of named series against x, written as a reproducible SVG.

    ``series`` maps a label to y values; None entries are dropped from that line.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "openqsl", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for label, ys in series.items():
            pts = [(a, b) for a, b in zip(x, ys) if b is not None and math.isfinite(b)]
            if pts:
                ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label, lw=1.4)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small")
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise ConfigurationError(f"cannot write {path}: {exc}") from exc
        finally:
            plt.close(fig)
