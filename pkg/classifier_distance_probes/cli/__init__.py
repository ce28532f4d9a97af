from .data import RunConfig
from .main import parse, execute, main, build_parser, parse_source
