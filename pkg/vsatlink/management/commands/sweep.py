from django.conf import settings

from vsatlink.management.base import ScenarioCommand, exit_codes
from vsatlink.pipeline import parse_range, run_sweep
from vsatlink.scenario import read_scenario_file


class Command(ScenarioCommand):
    help = "Run the simulation over a range of one scalar scenario key and write a BER table."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--param", required=True,
                            help="Key to sweep, as section.key (a bare key means run.key).")
        parser.add_argument("--values", required=True, help="start:stop:step, stop included.")
        parser.add_argument("--out", required=True, help="Output CSV path.")
        parser.add_argument("--workers", type=int, default=None,
                            help="Worker processes (default: VSATLINK_SWEEP_WORKERS).")

    def handle(self, *args, **options):
        workers = options["workers"] or settings.VSATLINK["SWEEP_WORKERS"]
        with exit_codes():
            raw = read_scenario_file(self.scenario_path(options))
            values = parse_range(options["values"])
            rows = run_sweep(raw, options["param"], values, options["out"], workers=workers)
        for value, ber, errors, bits in rows:
            self.stdout.write(f"{value:g}\t{ber:.6g}\t{errors}/{bits}")
