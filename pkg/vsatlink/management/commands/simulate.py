from django.conf import settings

from vsatlink.channel import MODES
from vsatlink.management.base import ScenarioCommand, exit_codes
from vsatlink.pipeline import run_simulation
from vsatlink.scenario import load_scenario

COMPENSATION_SWITCH = ("on", "off", "scenario")


class Command(ScenarioCommand):
    help = "Run the end-to-end link and write BER, constellation and spectrum files."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--out", required=True, help="Output directory.")
        parser.add_argument("--bits", type=int, help="Override run.total_bits.")
        parser.add_argument("--seed", type=int, help="Override run.seed.")
        parser.add_argument("--mode", choices=MODES, help="Override run.mode.")
        parser.add_argument("--es-n0-db", type=float, help="Override run.target_es_n0_db.")
        parser.add_argument("--phase-deg", type=float, help="Override impairments.phase_offset_deg.")
        parser.add_argument("--freq-hz", type=float, help="Override impairments.freq_offset_hz.")
        parser.add_argument(
            "--compensation",
            choices=COMPENSATION_SWITCH,
            default="scenario",
            help="Force every compensator on or off, or keep the scenario's flags.",
        )

    def overrides(self, options):
        overrides = {}
        for option, key in (
            ("bits", "run.total_bits"),
            ("seed", "run.seed"),
            ("mode", "run.mode"),
            ("es_n0_db", "run.target_es_n0_db"),
            ("phase_deg", "impairments.phase_offset_deg"),
            ("freq_hz", "impairments.freq_offset_hz"),
        ):
            if options.get(option) is not None:
                overrides[key] = options[option]
        if options.get("compensation", "scenario") != "scenario":
            enabled = options["compensation"] == "on"
            for flag in ("dc", "agc", "phase_freq"):
                overrides[f"compensation.{flag}"] = enabled
        return overrides

    def handle(self, *args, **options):
        with exit_codes():
            scenario = load_scenario(self.scenario_path(options), self.overrides(options))
            result = run_simulation(
                scenario,
                output_dir=options["out"],
                frame_log_every=settings.VSATLINK["FRAME_LOG_EVERY"],
            )
        report = result.ber
        self.stdout.write(
            f"BER {report.ber:.6g} ({report.bit_errors} errors / {report.bits_compared} bits)"
        )
        self.stdout.write(f"Artifacts in {options['out']}")
