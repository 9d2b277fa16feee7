"""Gel electrophoresis: band migration, imaging, and the decision readout.

Migration follows the standard log-length model, anchored so that the
longest ladder rung stays at the well and the tracking dye (run as a
100 bp equivalent) sits at the stop fraction of the lane when the run
ends. Intensities stay exact rationals until the moment an image is
rendered, where they are quantized to 256 gray levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .compiler import EncodingPlan
from .decision import DecisionMatrix, best_options
from .wetlab import ACTIVE, TubeState


class GelError(Exception):
    pass


class UnsupportedFormatError(GelError):
    pass


class UndecodableBandError(GelError):
    pass


@dataclass(frozen=True)
class GelConfig:
    gel_length: float = 100.0
    ladder: tuple[int, ...] = tuple(range(10, 201, 10))
    dye_length: int = 100
    stop_fraction: Fraction = Fraction(2, 3)
    resolution: int = 9
    agarose_percent: str = "2.5-3"

    def __post_init__(self):
        if not self.ladder or list(self.ladder) != sorted(set(self.ladder)):
            raise GelError("ladder must be a non-empty ascending list of lengths")
        if not 0 < self.stop_fraction <= 1:
            raise GelError(f"stop fraction {self.stop_fraction} outside (0, 1]")

    @property
    def max_length(self) -> int:
        return max(self.ladder)

    @classmethod
    def covering(cls, max_length: int, **kwargs) -> "GelConfig":
        """Default config, with the ladder extended in 10 bp steps as needed."""
        top = max(200, 10 * math.ceil(max_length / 10))
        return cls(ladder=tuple(range(10, top + 1, 10)), **kwargs)


def migrate(length, config: GelConfig = GelConfig()) -> float:
    """Distance run by a fragment of this length, in gel-length units."""
    value = float(length)
    if value <= 0:
        raise GelError(f"fragment length must be positive, got {length}")
    span = math.log(config.max_length) - math.log(config.dye_length)
    travel = math.log(config.max_length) - math.log(value)
    distance = float(config.stop_fraction) * config.gel_length * travel / span
    return max(0.0, distance)


def decode_length(distance: float, config: GelConfig = GelConfig()) -> float:
    """Inverse of `migrate` (lengths above the ladder top all sit at zero)."""
    span = math.log(config.max_length) - math.log(config.dye_length)
    stop = float(config.stop_fraction) * config.gel_length
    return math.exp(math.log(config.max_length) - distance * span / stop)


@dataclass(frozen=True)
class Band:
    length: Fraction
    intensity: Fraction
    migration: float


@dataclass(frozen=True)
class Lane:
    label: str
    bands: tuple[Band, ...]
    scale: Fraction = Fraction(1)


@dataclass(frozen=True)
class GelRun:
    config: GelConfig
    lanes: tuple[Lane, ...]

    def sample_lanes(self) -> tuple[Lane, ...]:
        return tuple(lane for lane in self.lanes if lane.label != "ladder")


def _merge_bands(raw: list[tuple[Fraction, Fraction]], config: GelConfig) -> tuple[Band, ...]:
    """Co-migrating species closer than the resolution fuse into one band."""
    bands: list[Band] = []
    cluster: list[tuple[Fraction, Fraction]] = []

    def close() -> None:
        if not cluster:
            return
        weight = sum(i for _, i in cluster)
        length = sum(l * i for l, i in cluster) / weight
        bands.append(Band(length, weight, migrate(length, config)))

    for length, intensity in sorted(raw):
        if cluster and length - cluster[-1][0] < config.resolution:
            cluster.append((length, intensity))
        else:
            close()
            cluster = [(length, intensity)]
    close()
    return tuple(bands)


def lane_from_tube(tube: TubeState, config: GelConfig) -> Lane:
    raw = [
        (Fraction(sp.length), sp.concentration)
        for _, sp in sorted(tube.species.items())
        if sp.status == ACTIVE and sp.is_duplex and sp.concentration > 0
    ]
    return Lane(tube.label, _merge_bands(raw, config), Fraction(2) ** tube.pcr_cycles)


def ladder_lane(config: GelConfig) -> Lane:
    bands = tuple(
        Band(Fraction(l), Fraction(1), migrate(l, config)) for l in config.ladder
    )
    return Lane("ladder", bands)


def run_gel(tubes: list[TubeState], config: GelConfig | None = None) -> GelRun:
    """Image the tubes; the ladder runs in the last lane."""
    if config is None:
        longest = max(
            (sp.length for t in tubes for sp in t.species.values() if sp.is_duplex),
            default=200,
        )
        config = GelConfig.covering(longest)
    lanes = tuple(lane_from_tube(t, config) for t in tubes) + (ladder_lane(config),)
    return GelRun(config, lanes)


def band_table(run: GelRun) -> str:
    """TSV: lane, length_bp, relative_intensity, migration_fraction."""
    rows = ["lane\tlength_bp\trelative_intensity\tmigration_fraction"]
    for lane in run.lanes:
        for band in lane.bands:
            frac = band.migration / run.config.gel_length
            rows.append(
                f"{lane.label}\t{band.length}\t{band.intensity}\t{frac:.6f}"
            )
    return "\n".join(rows) + "\n"


# -- rendering -------------------------------------------------------------

def _gray(intensity: Fraction, peak: Fraction) -> int:
    # 256-level quantization happens here and nowhere earlier
    norm = intensity / peak if peak else Fraction(0)
    return 235 - round(Fraction(215) * norm)


def render(run: GelRun, fmt: str = "svg") -> str:
    if fmt == "svg":
        return _render_svg(run)
    if fmt == "text":
        return _render_text(run)
    raise UnsupportedFormatError(f"unknown render format {fmt!r}")


def _render_svg(run: GelRun) -> str:
    config = run.config
    lane_w, margin, top, track = 90, 40, 30, 400
    width = 2 * margin + lane_w * len(run.lanes)
    height = top + track + 50

    def y(distance: float) -> float:
        return top + track * distance / config.gel_length

    peak = max(
        (b.intensity for lane in run.sample_lanes() for b in lane.bands),
        default=Fraction(1),
    )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#f4f1ea"/>',
    ]
    dye_y = y(float(config.stop_fraction) * config.gel_length)
    parts.append(
        f'<line x1="{margin}" y1="{dye_y:.2f}" x2="{width - margin}" y2="{dye_y:.2f}" '
        f'stroke="#4466aa" stroke-dasharray="4 3" stroke-width="1"/>'
    )
    for i, lane in enumerate(run.lanes):
        x = margin + i * lane_w
        parts.append(
            f'<text x="{x + lane_w / 2:.2f}" y="{top - 12}" font-size="12" '
            f'text-anchor="middle" font-family="monospace">{lane.label}</text>'
        )
        parts.append(
            f'<rect x="{x + 10}" y="{top}" width="{lane_w - 20}" height="{track}" '
            f'fill="#e8e2d4" stroke="#999999" stroke-width="0.5"/>'
        )
        is_ladder = lane.label == "ladder"
        for band in lane.bands:
            if band.migration > config.gel_length:
                continue  # ran off the end before the dye reached the stop line
            by = y(band.migration)
            if is_ladder:
                parts.append(
                    f'<rect x="{x + 14}" y="{by - 1:.2f}" width="{lane_w - 28}" '
                    f'height="2" fill="#8a8378"/>'
                )
                parts.append(
                    f'<text x="{x + lane_w - 10}" y="{by + 3:.2f}" font-size="9" '
                    f'font-family="monospace" fill="#6a6358">{band.length}</text>'
                )
            else:
                g = _gray(band.intensity, peak)
                parts.append(
                    f'<rect x="{x + 14}" y="{by - 3:.2f}" width="{lane_w - 28}" '
                    f'height="6" fill="rgb({g},{g},{g})"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_text(run: GelRun) -> str:
    config = run.config
    cols = 61
    lines = []
    for lane in run.lanes:
        track = ["."] * cols
        for band in lane.bands:
            if band.migration > config.gel_length:
                continue
            pos = round(band.migration / config.gel_length * (cols - 1))
            track[pos] = "|" if lane.label == "ladder" else "#"
        dye = round(float(config.stop_fraction) * (cols - 1))
        if track[dye] == ".":
            track[dye] = ":"
        summary = ", ".join(
            f"{band.length}bp x{band.intensity}" for band in lane.bands
        )
        lines.append(f"{lane.label:>8} [{''.join(track)}] {summary}")
    return "\n".join(lines) + "\n"


# -- decision readout --------------------------------------------------------

@dataclass(frozen=True)
class DecisionReport:
    option_labels: tuple[str, ...]
    totals: tuple[Fraction, ...]
    estimates: tuple[Fraction, ...]
    chosen: tuple[int, ...]
    oracle: tuple[int, ...]
    decoded: tuple[tuple[str, ...], ...]

    @property
    def agreement(self) -> bool:
        return self.chosen == self.oracle

    @property
    def chosen_labels(self) -> tuple[str, ...]:
        return tuple(self.option_labels[i] for i in self.chosen)

    def describe(self) -> str:
        lines = ["decision readout", "================"]
        for label, est, outs in zip(self.option_labels, self.estimates, self.decoded):
            lines.append(
                f"  {label}: expected utility {est} "
                f"(bands decoded as [{', '.join(outs)}])"
            )
        lines.append(f"chosen: {', '.join(self.chosen_labels)}")
        lines.append(
            "matches the exact oracle"
            if self.agreement
            else "DISAGREES with the exact oracle"
        )
        return "\n".join(lines) + "\n"


def readout(
    run: GelRun,
    plan: EncodingPlan,
    matrix: DecisionMatrix | None = None,
) -> DecisionReport:
    """Read lanes back into expected utilities and pick the winning options.

    Band lengths are recovered from migration distances via the ladder
    calibration, matched to predicted construct lengths within half the gel
    resolution, and their intensities (normalized by amplification) sum to
    each option's favorable probability mass.
    """
    if matrix is None:
        matrix = plan.matrix
    lanes = run.sample_lanes()
    if len(lanes) != len(matrix.options):
        raise GelError(
            f"{len(lanes)} sample lanes for {len(matrix.options)} options"
        )
    predicted = {
        out.label: plan.construct_length(out.label) for out in matrix.outcomes
    }
    tolerance = run.config.resolution / 2
    totals = []
    estimates = []
    decoded_all = []
    for lane, opt in zip(lanes, matrix.options):
        mass = Fraction(0)
        decoded = []
        for band in lane.bands:
            apparent = decode_length(band.migration, run.config)
            hits = [
                label
                for label, length in predicted.items()
                if abs(apparent - length) <= tolerance
            ]
            if len(hits) != 1:
                raise UndecodableBandError(
                    f"lane {lane.label}: band at {apparent:.1f} bp matches "
                    f"{len(hits)} predicted constructs"
                )
            decoded.append(hits[0])
            mass += band.intensity / lane.scale
        totals.append(sum((b.intensity for b in lane.bands), Fraction(0)))
        estimates.append(
            matrix.u_unfavorable + (matrix.u_favorable - matrix.u_unfavorable) * mass
        )
        decoded_all.append(tuple(decoded))
    top = max(estimates)
    chosen = tuple(i for i, e in enumerate(estimates) if e == top)
    return DecisionReport(
        option_labels=tuple(o.label for o in matrix.options),
        totals=tuple(totals),
        estimates=tuple(estimates),
        chosen=chosen,
        oracle=tuple(best_options(matrix)),
        decoded=tuple(decoded_all),
    )
