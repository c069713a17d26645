from .. import dependencies, schemas
from ..config import DEFAULT_MAX_ORDER, DEFAULT_PRIME
from ..properties import run_suite
from ..routing import CommandRouter, argument

router = CommandRouter(tags=["Verify"])


@router.command("verify", help="Run every property check at the given bounds.", arguments=[
    argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="Largest group order checked."),
    argument("--prime", type=int, default=DEFAULT_PRIME, help="Characteristic of the finite field used."),
])
def verify(args):
    prime = dependencies.parse_prime(args.prime)
    with dependencies.get_executor() as executor:
        results = run_suite(args.max_order, prime, executor)
    passed = all(result.passed for result in results)
    report = schemas.VerifyReport(max_order=str(args.max_order), prime=str(prime), passed=passed, results=results)
    return report, 0 if passed else 1
