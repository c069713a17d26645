from .. import dependencies, schemas
from ..abelian_group import presentation_group
from ..errors import CommandError, TwoDegreeError
from ..routing import CommandRouter, argument
from ..two_degree import (
    classify_two_degree_algebra,
    d_value,
    degenerate_ray,
    delta_of,
    enumerate_sigma,
    enumerate_sigma_bar,
    enumerate_theta2,
    invariants_for,
    lambda_delta,
    nc_ray_table,
    omega_set,
    universal_multiplication,
)

router = CommandRouter(tags=["Two degrees"])

GROUP = argument("group", help="Group spec: '4' is Z/4, '2,2' is Z/2 x Z/2.")
DATUM = [argument("r", type=int), argument("alpha", type=int), argument("N", type=int), argument("qbar", type=int)]


@router.command("omega", help="Record values of the residues q*beta mod N.",
                arguments=[argument("beta", type=int), argument("N", type=int)])
def show_omega(args):
    with dependencies.engine_errors("omega"):
        omega = omega_set(args.beta, args.N)
    return schemas.OmegaOut(
        beta=str(args.beta), N=str(args.N),
        omega=[str(q) for q in omega],
        d_values=[str(d_value(args.beta, args.N, q)) for q in omega],
    )


@router.command("invariants", help="z, x, y, w and the good pairs of a two-degree datum.", arguments=DATUM)
def show_invariants(args):
    with dependencies.engine_errors("invariants"):
        inv = invariants_for(args.r, args.alpha, args.N, args.qbar)
    return schemas.InvariantsOut(
        r=str(args.r), alpha=str(args.alpha), N=str(args.N), qbar=str(inv.qbar),
        qhat=str(inv.qhat), qprime=str(inv.qprime), z=str(inv.z), x=str(inv.x), y=str(inv.y),
        w=str(inv.w), gamma=str(inv.gamma), d_qhat=str(inv.d_qhat),
        profile=[str(v) for v in inv.profile],
        good_pairs=[
            schemas.GoodPairOut(element=l.label(), E=str(A), delta=str(B))
            for l, (A, B) in sorted(inv.good_pairs.items(), key=lambda item: item[0])
        ],
    )


def _identified_as(r, alpha, N, qbar, which):
    try:
        return degenerate_ray(r, alpha, N, qbar, which)[0]
    except TwoDegreeError:
        return None


@router.command("lambda-delta", help="The dual pair of rays Lambda, Delta.", arguments=DATUM)
def show_lambda_delta(args):
    datum = (args.r, args.alpha, args.N, args.qbar)
    with dependencies.engine_errors("lambda-delta"):
        Lambda, Delta = lambda_delta(*datum)
        return schemas.LambdaDeltaOut(
            r=str(args.r), alpha=str(args.alpha), N=str(args.N), qbar=str(args.qbar),
            lambda_ray=schemas.RayOut.of(Lambda), delta_ray=schemas.RayOut.of(Delta),
            lambda_identified_as=_identified_as(*datum, "lambda"),
            delta_identified_as=_identified_as(*datum, "delta"),
        )


@router.command("sigma", help="Data (r, alpha, N, qbar, phi) of smooth extremal rays with h = 2.", arguments=[
    GROUP,
    argument("--bar", action="store_true", help="Use the weaker conditions qbar r != 1, qbar != N."),
])
def list_sigma(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("sigma"):
        data = enumerate_sigma_bar(M) if args.bar else enumerate_sigma(M)
        return schemas.SigmaOut(
            group=schemas.GroupOut.of(M),
            strict=not args.bar,
            data=[
                schemas.SigmaDatumOut(r=str(chi.r), alpha=str(chi.alpha), N=str(chi.N), qbar=str(chi.qbar),
                                      phi=schemas.hom_images(chi.phi), delta_ray=schemas.RayOut.of(delta_of(chi)))
                for chi in data
            ],
        )


@router.command("theta2", help="Pardini rays and the pairs (Lambda, Delta) pulled back to the group.",
                arguments=[GROUP])
def list_theta2(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("theta2"):
        return schemas.Theta2Out(
            group=schemas.GroupOut.of(M),
            sequences=[[schemas.RayOut.of(ray) for ray in sequence] for sequence in enumerate_theta2(M)],
        )


@router.command("nc-table", help="Rays whose covers are normal crossings in codimension one.",
                arguments=[GROUP])
def list_nc_rays(args):
    M = dependencies.parse_group(args.group)
    with dependencies.engine_errors("nc-table"):
        return schemas.NCTableOut(
            group=schemas.GroupOut.of(M),
            rows=[
                schemas.NCRowOut(
                    row=str(row.row), l=str(row.l), group=row.group.spec, m=row.m.label(), n=row.n.label(),
                    r=str(row.r), alpha=str(row.alpha), N=str(row.N), qbar=str(row.qbar),
                    phi=schemas.hom_images(row.phi), ray=schemas.RayOut.of(row.ray), h=str(row.h),
                )
                for row in nc_ray_table(M)
            ],
        )


@router.command("classify", help="Classify an algebra generated in two degrees.", arguments=[
    argument("--table", default=None, help="JSON multiplication table."),
    argument("--m", default=None, help="First generating degree, for --table."),
    argument("--n", default=None, help="Second generating degree, for --table."),
    argument("--universal", default=None, help="r,alpha,N,qbar,lambda: classify the universal algebra."),
    argument("--field", default="QQ", help="QQ or GF(p), for --universal."),
])
def classify(args):
    if (args.table is None) == (args.universal is None):
        raise CommandError(status_code=2, detail="give exactly one of --table and --universal")
    if args.table is not None:
        if args.m is None or args.n is None:
            raise CommandError(status_code=2, detail="--table needs --m and --n")
        table = dependencies.load_table(args.table)
        m = dependencies.parse_element(table.group, args.m)
        n = dependencies.parse_element(table.group, args.n)
    else:
        *datum, lam_text = args.universal.split(",")
        r, alpha, N, qbar = dependencies.parse_ints(",".join(datum), 4)
        scalars = dependencies.parse_field(args.field)
        lam = scalars.to_fraction(dependencies.parse_scalar(scalars, lam_text))
        with dependencies.engine_errors("universal algebra"):
            table = universal_multiplication(r, alpha, N, qbar, lam, 0, scalars)
        _, m, n = presentation_group(r, alpha, N)

    with dependencies.engine_errors("classify"):
        result = classify_two_degree_algebra(table, m, n)
    scalars = table.scalars
    P = result.presentation
    return schemas.ClassificationOut(
        field=str(scalars), r=str(P.r), alpha=str(P.alpha), N=str(P.N), qbar=str(result.qbar),
        lam=scalars.to_text(result.lam),
        twist={x.label(): scalars.to_text(result.twist(x)) for x in table.group.elements()},
    )
