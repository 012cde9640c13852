"""Regenerate the example scenario documents under scenarios/.

Each document is written in canonical JSON (sorted keys, two-space indent)
so reruns are diff-stable.  ``boxswap run scenarios/<name>.json`` executes
any of them.
"""

from pathlib import Path

from boxswap import (
    INV_SQRT2,
    ScenarioBox,
    ScenarioCoupler,
    ScenarioSpec,
    ScenarioWiring,
    mixed,
    pr,
    save_json,
    tensor,
)

OUT = Path(__file__).resolve().parent.parent / "scenarios"


def swap_two_pr() -> ScenarioSpec:
    return ScenarioSpec(
        name="swap-two-pr",
        boxes=(
            ScenarioBox("left", "pr", 2, ("a", "b1")),
            ScenarioBox("right", "pr", 2, ("b2", "c")),
        ),
        couplers=(ScenarioCoupler(2, ("b1", "b2")),),
        reports=("gsi", "ch"),
    )


def swap_two_tsirelson() -> ScenarioSpec:
    # both inputs sit exactly on the quantum boundary, so the success
    # branch lands exactly on the local bound
    return ScenarioSpec(
        name="swap-two-tsirelson",
        boxes=(
            ScenarioBox("left", "isotropic", 2, ("a", "b1"), xi=INV_SQRT2),
            ScenarioBox("right", "isotropic", 2, ("b2", "c"), xi=INV_SQRT2),
        ),
        couplers=(ScenarioCoupler(2, ("b1", "b2")),),
        reports=("gsi", "ch"),
    )


def swap_many_three_pr() -> ScenarioSpec:
    return ScenarioSpec(
        name="swap-many-three-pr",
        boxes=(
            ScenarioBox("g1", "pr", 2, ("a", "b1")),
            ScenarioBox("g2", "pr", 2, ("c", "b2")),
            ScenarioBox("g3", "pr", 2, ("d", "b3")),
        ),
        couplers=(ScenarioCoupler(3, ("b1", "b2", "b3")),),
    )


def hybrid_three() -> ScenarioSpec:
    return ScenarioSpec(
        name="hybrid-three",
        boxes=(
            ScenarioBox("g1", "pr", 2, ("a1", "b1")),
            ScenarioBox("g2", "pr", 2, ("c2", "b2")),
            ScenarioBox("g3", "pr", 2, ("c1", "b3")),
            ScenarioBox("g4", "pr", 2, ("d2", "b4")),
            ScenarioBox("g5", "pr", 2, ("d1", "b5")),
            ScenarioBox("g6", "pr", 2, ("a2", "b6")),
        ),
        couplers=(
            ScenarioCoupler(2, ("b1", "b2")),
            ScenarioCoupler(2, ("b3", "b4")),
            ScenarioCoupler(2, ("b5", "b6")),
        ),
        wirings=(
            ScenarioWiring(("a1", "a2"), "a"),
            ScenarioWiring(("c1", "c2"), "c"),
            ScenarioWiring(("d1", "d2"), "d"),
        ),
    )


def pr_self_coupled() -> ScenarioSpec:
    # the coupler consumes a correlated two-party marginal (both ends of
    # one PR box) rather than a product of independent ends; since PR is
    # exactly what the success weight tests for, success is certain
    return ScenarioSpec(
        name="pr-self-coupled",
        boxes=(
            ScenarioBox(
                "spectators-and-pr",
                "inline",
                4,
                ("k1", "k2", "b1", "b2"),
                table=tensor(mixed(2), pr()),
            ),
        ),
        couplers=(ScenarioCoupler(2, ("b1", "b2")),),
    )


def hybrid_three_success() -> ScenarioSpec:
    spec = hybrid_three()
    conditioned = tuple(
        ScenarioCoupler(c.arity, c.consumed, outcome=0) for c in spec.couplers
    )
    return ScenarioSpec(
        name="hybrid-three-success",
        boxes=spec.boxes,
        couplers=conditioned,
        wirings=spec.wirings,
    )


BUILDERS = (
    swap_two_pr,
    swap_two_tsirelson,
    swap_many_three_pr,
    hybrid_three,
    hybrid_three_success,
    pr_self_coupled,
)


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for build in BUILDERS:
        spec = build()
        path = OUT / f"{spec.name.replace('-', '_')}.json"
        save_json(path, spec.to_json())
        print(f"wrote {path.relative_to(OUT.parent)}")


if __name__ == "__main__":
    main()
