from django.template.loader import render_to_string

from vsatlink import artifacts
from vsatlink.exceptions import ConfigError
from vsatlink.linkbudget import combined_cn_db, compute_budget
from vsatlink.management.base import ScenarioCommand, exit_codes
from vsatlink.pipeline import stage
from vsatlink.scenario import load_scenario


class Command(ScenarioCommand):
    help = "Print the uplink/downlink power budget of a scenario."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--json", dest="json_path", help="Also write the report as JSON here.")

    def handle(self, *args, **options):
        with exit_codes():
            scenario = load_scenario(self.scenario_path(options))
            if not scenario.budget_legs:
                raise ConfigError("budget_legs: no legs configured")

            reports = [compute_budget(leg) for leg in scenario.budget_legs]
            combined = combined_cn_db(r.cn_db for r in reports) if len(reports) > 1 else None

            self.stdout.write(render_to_string("vsatlink/linkbudget.txt", {
                "reports": reports,
                "combined_cn_db": combined,
            }), ending="")

            if options["json_path"]:
                with stage("artifacts"):
                    artifacts.write_json(options["json_path"], {
                        "legs": [r.to_dict() for r in reports],
                        "combined_cn_db": combined,
                    })
