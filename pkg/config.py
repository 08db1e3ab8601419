import os
from dataclasses import dataclass

from dotenv import load_dotenv
from sympy import isprime
from sympy.polys.domains import GF, QQ

from errors import ConfigError

# Load environment variables (optional, for local experiments)
load_dotenv()

# Configuration
DEFAULT_FIELD = os.getenv("LPA_FIELD", "q")
DEFAULT_LEN_CAP = int(os.getenv("LPA_LEN_CAP", "3"))
EXTRA_BOUND = int(os.getenv("LPA_EXTRA_BOUND", "6"))
DEFAULT_FORMAT = os.getenv("LPA_FORMAT", "text")
REPORT_DIR = os.getenv("LPA_REPORT_DIR")
LOG_LEVEL = os.getenv("LPA_LOG_LEVEL", "WARNING")

OUTPUT_FORMATS = ("text", "json")


def parse_field(text):
    """Turns ``q`` or ``fp:<p>`` into a sympy field domain.

    Args:
        text (str): Field specification.

    Returns:
        Domain: ``QQ`` or ``GF(p, symmetric=False)``.
    """
    text = text.strip().lower()
    if text in ("q", "qq"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise ConfigError(f"invalid prime in field {text!r}") from None
        if not isprime(p):
            raise ConfigError(f"{p} is not prime")
        return GF(p, symmetric=False)
    raise ConfigError(f"unknown field {text!r}, expected q or fp:<p>")


def field_name(field):
    p = field.characteristic()
    return f"fp:{p}" if p else "q"


@dataclass
class SessionConfig:
    """Settings shared by every CLI subcommand."""

    graph_path: str
    field: object = QQ
    seed: int = None
    len_cap: int = DEFAULT_LEN_CAP
    output_format: str = DEFAULT_FORMAT

    def __post_init__(self):
        if self.len_cap < 1:
            raise ConfigError("--len-cap must be >= 1")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}")

    @classmethod
    def from_args(cls, args):
        """Builds the session settings from the argparse namespace."""
        return cls(
            graph_path=args.graph,
            field=parse_field(args.field),
            seed=args.seed,
            len_cap=args.len_cap,
            output_format=args.format,
        )
