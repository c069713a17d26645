from .. import dependencies, schemas
from ..cover_monoid import H_of_ray, extremal_rays
from ..errors import CommandError
from ..graded_algebra import H_of_table
from ..routing import CommandRouter, argument
from ..stack_analysis import (
    full_smooth_locus_fan,
    h_locus_membership,
    irreducibility_report,
    smoothness_verdict,
    theta2_fan,
)

router = CommandRouter(tags=["Stack"])

GROUP = argument("group", help="Group spec: '4' is Z/4, '2,2' is Z/2 x Z/2.")


@router.command("h", help="H, h and membership in the loci h <= 1 and h <= 2.", arguments=[
    GROUP,
    argument("--ray-index", type=int, default=None, help="Index into the extremal rays."),
    argument("--table", default=None, help="JSON multiplication table over the group."),
])
def h_report(args):
    M = dependencies.parse_group(args.group)
    if (args.ray_index is None) == (args.table is None):
        raise CommandError(status_code=2, detail="give exactly one of --ray-index and --table")
    if args.table is not None:
        target = dependencies.load_table(args.table)
        if target.group != M:
            raise CommandError(status_code=2, detail=f"the table lives on {target.group}, not {M}")
        H = H_of_table(target)
    else:
        rays = extremal_rays(M)
        if not 0 <= args.ray_index < len(rays):
            raise CommandError(status_code=2, detail=f"{M} has {len(rays)} extremal rays")
        target = rays[args.ray_index]
        H = H_of_ray(target)

    with dependencies.engine_errors("h"):
        level1 = h_locus_membership(target, 1)
        level2 = h_locus_membership(target, 2)
    return schemas.HReportOut(
        group=schemas.GroupOut.of(M),
        H=schemas.element_labels(sorted(H)),
        h=str(level1.h),
        level1=level1.member,
        level2=level2.member,
    )


@router.command("reducible", help="Is the moduli of covers reducible?", arguments=[GROUP])
def reducible(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("reducible"):
        report = irreducibility_report(M)
    return schemas.IrreducibilityOut(
        group=schemas.GroupOut.of(M),
        verdict=report.verdict.value,
        reason=report.reason,
        certificate=schemas.element_labels(report.certificate) if report.certificate else None,
    )


@router.command("smooth-stack", help="Is the moduli of covers smooth?", arguments=[GROUP])
def smooth_stack(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("smooth-stack"):
        verdict = smoothness_verdict(M)
    return schemas.SmoothnessVerdictOut(
        group=schemas.GroupOut.of(M),
        smooth=verdict.smooth,
        witness=schemas.element_labels(verdict.witness) if verdict.witness else None,
        relation=verdict.relation,
    )


@router.command("fan", help="Toric fan of a collection of smooth sequences.", arguments=[
    GROUP,
    argument("--theta", choices=["theta2", "all"], default="theta2",
             help="theta2 for the pairs (Lambda, Delta), all for every smooth sequence of extremal rays."),
])
def show_fan(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("fan"):
        fan = theta2_fan(M) if args.theta == "theta2" else full_smooth_locus_fan(M)
    return schemas.FanOut.of(fan)
