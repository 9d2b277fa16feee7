"""Deterministic simulation of the bench protocol.

Species concentrations are exact rationals in relative stock units (one
pooled dose = 1). Operations never mutate a tube; each returns a fresh
TubeState with an audit record appended, so a whole run is reproducible
from its log. Thresholding follows pairwise dose semantics: a threshold
dosed at ratio r holds back min(r, c) from EACH chance species it targets,
the ratio being defined against that species' own stock.

Assembly uses limiting-reagent accounting against the concentrations at
entry: every root-to-termination path yields construct at the minimum of
its nine constituents, and shared constituents are debited by total demand
(floored at zero). Yields are nominal per-path numbers, which is exactly
what a within-lane band comparison measures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction

from .compiler import (
    ROLE_PRIMER_LEFT,
    ROLE_PRIMER_RIGHT,
    EncodingPlan,
    ProtocolPlan,
    role_link_choice,
    role_link_prob,
    role_link_util,
    role_thresh,
)
from .decision import (
    ROLE_CHOICE,
    ROLE_TERM,
    _slug,
    role_chance,
    role_option,
    role_prob,
    role_util,
)
from .strands import Duplex, RecognitionSite, Strand, cut, reverse_complement

ACTIVE = "active"
WASTE = "waste"


class UnknownEnzymeError(ValueError):
    pass


class CycleCountError(ValueError):
    pass


@dataclass(frozen=True)
class Species:
    key: str
    structure: Strand | Duplex
    concentration: Fraction
    status: str = ACTIVE
    amplified: bool = False

    @property
    def length(self) -> int:
        if isinstance(self.structure, Duplex):
            return self.structure.span_length
        return len(self.structure.seq)

    @property
    def is_duplex(self) -> bool:
        return isinstance(self.structure, Duplex)


@dataclass(frozen=True)
class TubeState:
    label: str
    plan: EncodingPlan
    species: dict[str, Species]
    log: tuple[dict, ...] = ()
    pcr_cycles: int = 0

    def concentration(self, key: str) -> Fraction:
        sp = self.species.get(key)
        return sp.concentration if sp else Fraction(0)

    def active(self) -> list[Species]:
        return [s for s in self.species.values() if s.status == ACTIVE]

    def _with(self, species: dict[str, Species], record: dict) -> "TubeState":
        return replace(self, species=species, log=self.log + (record,))


def audit_json(tube: TubeState) -> str:
    def default(x):
        if isinstance(x, Fraction):
            return str(x)
        raise TypeError(f"not auditable: {x!r}")

    return json.dumps(list(tube.log), indent=2, default=default, sort_keys=True)


def mix(plan: EncodingPlan) -> TubeState:
    """Pool every encoding species; thresholds go in at their dose ratios."""
    species: dict[str, Species] = {}
    for role in plan.strands:
        if role in (ROLE_PRIMER_LEFT, ROLE_PRIMER_RIGHT):
            continue  # primers join at amplification, not in the pool
        conc = Fraction(1)
        if role.startswith("thresh:"):
            label = _unslug_lookup(plan, role)
            conc = plan.threshold_ratios[label]
        species[role] = Species(role, plan.strands[role], conc)
    record = {
        "op": "mix",
        "species": len(species),
        "thresholds": {
            role_thresh(out.label): str(plan.threshold_ratios[out.label])
            for out in plan.matrix.outcomes
        },
    }
    return TubeState("pool", plan, species, (record,))


def _unslug_lookup(plan: EncodingPlan, thresh_role: str) -> str:
    for out in plan.matrix.outcomes:
        if role_thresh(out.label) == thresh_role:
            return out.label
    raise KeyError(thresh_role)


def apply_thresholds(tube: TubeState) -> TubeState:
    """Let each threshold sequester its outcome's chance strands.

    Per chance species: consumed = min(dose, concentration); the consumed
    amount moves into an inert waste complex. Material is conserved per
    chance species (active + waste before == after).
    """
    plan = tube.plan
    species = dict(tube.species)
    detail: dict[str, dict] = {}
    for out in plan.matrix.outcomes:
        th_key = role_thresh(out.label)
        if th_key not in species:
            continue
        dose = species[th_key].concentration
        max_consumed = Fraction(0)
        for opt in plan.matrix.options:
            ch_key = role_chance(opt.label, out.label)
            if ch_key not in species:
                continue
            c = species[ch_key].concentration
            consumed = min(dose, c)
            max_consumed = max(max_consumed, consumed)
            if consumed == 0:
                continue
            species[ch_key] = replace(species[ch_key], concentration=c - consumed)
            waste_key = f"waste:{th_key}+{ch_key}"
            waste_structure = species[th_key].structure
            species[waste_key] = Species(
                waste_key, waste_structure, consumed, status=WASTE
            )
            detail[ch_key] = {
                "dose": str(dose),
                "consumed": str(consumed),
                "remaining": str(c - consumed),
            }
        species[th_key] = replace(
            species[th_key], concentration=max(Fraction(0), dose - max_consumed)
        )
    return tube._with(species, {"op": "thresholds", "displaced": detail})


def path_roles(option_label: str, outcome_label: str) -> list[str]:
    """The nine species one construct consumes."""
    return [
        ROLE_CHOICE,
        role_link_choice(option_label),
        role_option(option_label),
        role_chance(option_label, outcome_label),
        role_prob(outcome_label),
        role_link_prob(outcome_label),
        role_util(outcome_label),
        role_link_util(outcome_label),
        ROLE_TERM,
    ]


def construct_key(option_label: str, outcome_label: str) -> str:
    return f"construct:{_slug(option_label)}:{_slug(outcome_label)}"


def assemble(tube: TubeState) -> TubeState:
    """Ligate every path into its full blunt construct at limiting yield."""
    plan = tube.plan
    species = dict(tube.species)
    snapshot = {k: s.concentration for k, s in species.items() if s.status == ACTIVE}
    yields: dict[tuple[str, str], Fraction] = {}
    demand: dict[str, Fraction] = {}
    for opt in plan.matrix.options:
        for out in plan.matrix.outcomes:
            roles = path_roles(opt.label, out.label)
            amount = min(snapshot.get(r, Fraction(0)) for r in roles)
            yields[(opt.label, out.label)] = amount
            for r in roles:
                demand[r] = demand.get(r, Fraction(0)) + amount
    for key, used in demand.items():
        left = max(Fraction(0), snapshot[key] - used)
        species[key] = replace(species[key], concentration=left)
    for (opt_label, out_label), amount in yields.items():
        top = plan.construct_top(opt_label, out_label)
        key = construct_key(opt_label, out_label)
        structure = Duplex(
            Strand(top, key + ".top"),
            Strand(reverse_complement(top), key + ".bottom"),
            0,
        )
        species[key] = Species(key, structure, amount)
    record = {
        "op": "assemble",
        "yields": {construct_key(o, u): str(a) for (o, u), a in yields.items()},
    }
    return tube._with(species, record)


def split_tubes(tube: TubeState) -> list[TubeState]:
    """One aliquot per option; per-volume concentrations carry over unchanged."""
    tubes = []
    for i, opt in enumerate(tube.plan.matrix.options):
        label = f"tube-{i + 1}"
        record = {"op": "split", "tube": label, "option": opt.label}
        tubes.append(
            TubeState(label, tube.plan, dict(tube.species), tube.log + (record,))
        )
    return tubes


def _site_catalog(plan: EncodingPlan) -> dict[str, RecognitionSite]:
    catalog = {s.enzyme: s for s in plan.option_sites.values()}
    catalog.update({s.enzyme: s for s in plan.outcome_sites.values()})
    return catalog


def digest(tube: TubeState, enzyme_names) -> TubeState:
    """Cut every active duplex with each named enzyme, to completion."""
    catalog = _site_catalog(tube.plan)
    sites = []
    for name in sorted(enzyme_names):
        if name not in catalog:
            raise UnknownEnzymeError(
                f"{name} is not in this plan's library: {sorted(catalog)}"
            )
        sites.append(catalog[name])
    species = dict(tube.species)
    cuts: dict[str, list[int]] = {}
    for key, sp in list(species.items()):
        if sp.status != ACTIVE or not sp.is_duplex:
            continue
        pieces = [sp.structure]
        for site in sites:
            pieces = [frag for piece in pieces for frag in cut(piece, site)]
        if len(pieces) == 1:
            continue
        del species[key]
        for i, frag in enumerate(pieces):
            frag_key = f"fragment:{key}:{i}"
            species[frag_key] = Species(frag_key, frag, sp.concentration)
        cuts[key] = [p.span_length for p in pieces]
    record = {
        "op": "digest",
        "enzymes": [s.enzyme for s in sites],
        "fragments": cuts,
    }
    return tube._with(species, record)


def pcr(tube: TubeState, cycles: int, primers: tuple[Strand, Strand] | None = None) -> TubeState:
    """Exponential amplification of blunt duplexes whose ends match the primers."""
    if cycles < 0:
        raise CycleCountError(f"cycle count must be non-negative, got {cycles}")
    if primers is None:
        primers = tube.plan.primers
    p1, p2 = primers[0].seq, primers[1].seq
    factor = Fraction(2) ** cycles

    def matches(primer: str, end: str) -> bool:
        return primer == end or primer == reverse_complement(end)

    species = dict(tube.species)
    amplified = []
    for key, sp in list(species.items()):
        if sp.status != ACTIVE or not sp.is_duplex:
            continue
        duplex = sp.structure
        if not duplex.is_blunt or duplex.span_length < 2 * len(p1):
            continue
        top = duplex.top.seq
        left, right = top[: len(p1)], top[-len(p2) :]
        if (matches(p1, left) and matches(p2, right)) or (
            matches(p2, left) and matches(p1, right)
        ):
            species[key] = replace(
                sp, concentration=sp.concentration * factor, amplified=True
            )
            amplified.append(key)
    record = {"op": "pcr", "cycles": cycles, "amplified": sorted(amplified)}
    return replace(
        tube,
        species=species,
        log=tube.log + (record,),
        pcr_cycles=tube.pcr_cycles + cycles,
    )


def purify(tube: TubeState) -> TubeState:
    """Keep amplified material only; leftovers, fragments and waste wash out."""
    kept = {k: s for k, s in tube.species.items() if s.status == ACTIVE and s.amplified}
    removed = sorted(set(tube.species) - set(kept))
    return tube._with(kept, {"op": "purify", "removed": removed})


def run_protocol(
    plan: EncodingPlan, protocol: ProtocolPlan, cycles: int | None = None
) -> list[TubeState]:
    """mix -> thresholds -> assemble -> split -> (digest, pcr, purify) per tube."""
    n = cycles if cycles is not None else protocol.pcr_cycles
    pool = assemble(apply_thresholds(mix(plan)))
    tubes = split_tubes(pool)
    out = []
    for tube, enzymes in zip(tubes, protocol.tube_enzymes):
        out.append(purify(pcr(digest(tube, enzymes), n)))
    return out
