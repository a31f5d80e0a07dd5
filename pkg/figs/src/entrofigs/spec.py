"""Figure specs: one TOML file per figure, same dialect as the run configs."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import SpecError, UnknownFigureKind

FIGURE_KINDS = ("ledger_timeseries", "sweep_scaling", "twin_bodies_panel")

SPEC_KEYS = {"kind", "input", "output", "title", "bounds"}


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input: Path
    output: Path
    title: str = ""
    bounds: tuple = ()      # ((label, value), ...) drawn as horizontal lines

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise UnknownFigureKind(
                f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        if self.output.suffix.lower() not in (".svg", ".png"):
            raise SpecError(f"output must be .svg or .png, got {self.output.suffix!r}")


def load_spec(path: str | Path) -> FigureSpec:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read figure spec: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"figure spec does not parse as TOML: {exc}") from exc

    unknown = set(raw) - SPEC_KEYS
    if unknown:
        raise SpecError(f"unknown figure spec key(s): {', '.join(sorted(unknown))}")
    for key in ("kind", "input", "output"):
        if key not in raw:
            raise SpecError(f"figure spec is missing the {key!r} key")

    bounds = []
    for entry in raw.get("bounds", []):
        if set(entry) != {"label", "value"}:
            raise SpecError("each bounds entry needs exactly 'label' and 'value'")
        bounds.append((str(entry["label"]), float(entry["value"])))

    base = Path(path).parent
    return FigureSpec(
        kind=str(raw["kind"]),
        input=base / str(raw["input"]),
        output=base / str(raw["output"]),
        title=str(raw.get("title", "")),
        bounds=tuple(bounds),
    )
