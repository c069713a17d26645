from .. import dependencies, schemas
from ..cover_monoid import (
    build_cover_lattice,
    extremal_rays,
    extremal_rays_bruteforce,
    h_of_ray,
    is_smooth_ray,
    pardini_maps,
    pardini_ray,
    reduced_presentation,
    relation_text,
    variable_text,
)
from ..errors import InvariantViolation
from ..routing import CommandRouter, argument

router = CommandRouter(tags=["Lattice"])

GROUP = argument("group", help="Group spec: '4' is Z/4, '2,2' is Z/2 x Z/2.")


@router.command("lattice", help="Rank and basis of the cover lattice K.", arguments=[GROUP])
def show_lattice(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("lattice"):
        lattice = build_cover_lattice(M)
    return schemas.LatticeOut(
        group=schemas.GroupOut.of(M),
        rank=str(lattice.rank),
        k_basis=[[str(x) for x in row] for row in lattice.k_basis],
        generators=[
            schemas.GeneratorOut(pair=variable_text(pair), k_coordinates=[str(x) for x in coords])
            for pair, coords in zip(lattice.pairs, lattice.generator_coords)
        ],
    )


@router.command("presentation", help="Binomial relations among the generators of the cover monoid.",
                arguments=[GROUP])
def show_presentation(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("presentation"):
        presentation = reduced_presentation(M)
    return schemas.PresentationOut(
        group=schemas.GroupOut.of(M),
        variables=[variable_text(p) for p in presentation.variables],
        relations=[relation_text(lhs, rhs) for lhs, rhs in presentation.relations],
    )


@router.command("rays", help="Extremal rays of the cover monoid.", arguments=[
    GROUP,
    argument("--check", action="store_true", help="Compare with brute-force facet enumeration."),
])
def list_rays(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("rays"):
        rays = extremal_rays(M)
        if args.check and sorted(r.dual for r in rays) != sorted(r.dual for r in extremal_rays_bruteforce(M)):
            raise InvariantViolation(f"double description and brute force disagree on {M}")
        return schemas.RayListOut(
            group=schemas.GroupOut.of(M),
            rays=[schemas.RayOut.of(ray, i) for i, ray in enumerate(rays)],
            checked_against_bruteforce=args.check,
        )


@router.command("pardini", help="Rays of surjections onto cyclic groups.", arguments=[
    GROUP,
    argument("--target", type=int, default=None, help="Only surjections onto Z/l."),
])
def list_pardini(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("pardini"):
        maps = [eta for eta in pardini_maps(M)
                if args.target is None or eta.target.factor_orders[0] == args.target]
        return schemas.PardiniListOut(
            group=schemas.GroupOut.of(M),
            rays=[
                schemas.PardiniRayOut(target=eta.target.spec, images=schemas.hom_images(eta),
                                      ray=schemas.RayOut.of(pardini_ray(eta)))
                for eta in maps
            ],
        )


@router.command("smooth-check", help="Smoothness and h of every extremal ray.", arguments=[GROUP])
def smooth_check(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("smooth-check"):
        return schemas.SmoothCheckOut(
            group=schemas.GroupOut.of(M),
            rays=[
                schemas.RaySmoothnessOut(index=str(i), smooth=is_smooth_ray(ray), h=str(h_of_ray(ray)),
                                         support_size=str(len(ray.support)))
                for i, ray in enumerate(extremal_rays(M))
            ],
        )
