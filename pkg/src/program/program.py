import argparse
import json

from pydantic import ValidationError

from program.potential import ConfigParseError, PotentialValidationError, load_potential, validate
from program.services.evolve import EvolveService
from program.services.jost import JostService
from program.services.scatter import ScatterService
from program.services.shared import RunContext
from program.services.verify import VerifyService
from program.services.waveop import WaveOpService
from program.settings.manager import settings_manager
from program.utils import get_version
from program.utils.cli import settings_overrides
from program.utils.export import ArtifactWriter
from program.utils.logging import logger

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

SERVICES = {
    "scatter": ScatterService,
    "jost": JostService,
    "waveop": WaveOpService,
    "evolve": EvolveService,
    "verify": VerifyService,
}


class Program:
    """Program class"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.service = None
        self.spec = None
        self.initialized = False

    def apply_settings(self):
        """Fold the command-line overrides into the shared settings."""
        settings = json.loads(settings_manager.settings.model_dump_json())
        for (section, field), value in settings_overrides(self.args).items():
            settings[section][field] = value
        if self.args.seed is not None:
            settings["seed"] = self.args.seed
        settings_manager.load(settings)
        if self.args.save_settings:
            settings_manager.save()
            logger.log("PROGRAM", f"Settings written to {settings_manager.settings_file}")

    def initialize_services(self):
        self.service = SERVICES[self.args.command]()
        if not self.service.initialized:
            logger.error(f"The {self.service.key} service rejected its settings")
        self.initialized = self.service.initialized

    def options(self) -> dict:
        options = {"potential": self.args.potential, "seed": settings_manager.settings.seed}
        for name in ("modes", "recipe", "t_final", "coupling"):
            value = getattr(self.args, name, None)
            if value is not None:
                options[name] = value
        return options

    def run(self) -> int:
        logger.log("PROGRAM", f"deltascatter v{get_version()}: {self.args.command} on {self.args.potential}")
        try:
            self.apply_settings()
            self.spec = load_potential(self.args.potential)
            validate(self.spec)
        except (ConfigParseError, PotentialValidationError, ValidationError) as e:
            logger.error(f"{type(e).__name__}: {e}")
            return EXIT_CONFIG_ERROR

        self.initialize_services()
        if not self.initialized:
            return EXIT_CONFIG_ERROR
        writer = ArtifactWriter()
        context = RunContext(self.spec, writer, self.options())
        try:
            self.service.run(context)
        except Exception as e:
            logger.exception(f"{self.service.key} stopped: {e}")
            writer.manifest(self.config())
            return EXIT_CHECK_FAILED
        writer.manifest(self.config())

        if context.passed:
            logger.log("COMPLETED", f"{self.service.key}: {len(context.checks)} checks passed")
            return EXIT_OK
        logger.warning(f"{self.service.key}: {sum(not c.passed for c in context.checks)} of {len(context.checks)} checks failed")
        return EXIT_CHECK_FAILED

    def config(self) -> dict:
        return {
            "command": self.args.command,
            "potential": json.loads(self.spec.model_dump_json()),
            "options": {k: v for k, v in self.options().items() if k != "potential"},
            "settings": json.loads(settings_manager.settings.model_dump_json(exclude={"version", "output"})),
        }
