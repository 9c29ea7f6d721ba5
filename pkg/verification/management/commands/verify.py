# verification/management/commands/verify.py

from django.core.management.base import BaseCommand, CommandError

from verification.runner import EXIT_CONFIG, EXIT_OK, run
from verification.serializers import COMMANDS

# option dest -> RunConfig key
CONFIG_KEYS = (
    'tau', 'tau_angle', 'regime', 'n', 'spin_a', 'convention', 'weight', 'domain', 'X', 'ypad',
    'nx', 'ny', 'nodes', 'tol', 'out', 'format', 'seed', 'level', 'grid', 'basis_size',
)


class Command(BaseCommand):
    help = 'Run a modular-double check or tabulation and write its JSON report or CSV grid'

    def add_arguments(self, parser):
        parser.add_argument('check', choices=COMMANDS, help='Check or tabulation to run')
        parser.add_argument('--tau', help='Complex tau, e.g. "0.5+0.866j" or "4"')
        parser.add_argument('--tau-angle', dest='tau_angle', type=float, help='Regime II tau = exp(i theta), theta in degrees')
        parser.add_argument('--regime', choices=['I', 'II'])
        parser.add_argument('--n', type=int, help='Discrete-series spin a = n omega_pp')
        parser.add_argument('--spin-a', dest='spin_a', help='Generic spin in units of omega_pp (complex allowed)')
        parser.add_argument('--convention', choices=['Sec2', 'Sec3'])
        parser.add_argument('--weight', choices=['product', 'gamma', 'printed'])
        parser.add_argument('--domain', type=int, help='Region index 1..n, counted upward')
        parser.add_argument('--X', dest='X', type=float, help='Half-width of the x truncation')
        parser.add_argument('--ypad', type=float, help='y truncation of unbounded regions')
        parser.add_argument('--nx', type=int)
        parser.add_argument('--ny', type=int)
        parser.add_argument('--nodes', type=int, help='Contour nodes of the dilogarithm integral')
        parser.add_argument('--tol', type=float, help='Override the tolerance of the asserted residuals')
        parser.add_argument('--out', help='Output file; relative paths land under MODDOUBLE_OUTPUT_DIR')
        parser.add_argument('--format', choices=['json', 'csv'])
        parser.add_argument('--seed', type=int)
        parser.add_argument('--level', type=int, help='Zero level for the zeros check')
        parser.add_argument('--grid', help='imag:lo:hi:count or real:lo:hi:count for t, y:lo:hi:count for the profile along t = -2iy; bounds in units of mu')
        parser.add_argument('--basis-size', dest='basis_size', type=int, help='Gram basis size (at most 32)')

    def handle(self, *args, **options):
        data = {'command': options['check']}
        data.update({key: options[key] for key in CONFIG_KEYS if options.get(key) is not None})

        result = run(data)

        if result.exit_code == EXIT_CONFIG:
            raise CommandError(f"❌ Configuration error: {result.content}", returncode=EXIT_CONFIG)
        if result.outcome is None:
            raise CommandError(f"❌ {options['check']} failed: {result.content}", returncode=result.exit_code)

        if result.path:
            self.stderr.write(f"📄 Report written to {result.path}")
        else:
            self.stdout.write(result.content, ending='')

        if result.exit_code != EXIT_OK:
            raise CommandError(f"❌ {options['check']}: tolerance violated", returncode=result.exit_code)
        self.stderr.write(self.style.SUCCESS(f"✅ {options['check']}: all residuals within tolerance"))
