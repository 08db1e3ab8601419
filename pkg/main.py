import argparse
import json
import logging
import os
import sys

from config import (
    DEFAULT_FIELD,
    DEFAULT_FORMAT,
    DEFAULT_LEN_CAP,
    LOG_LEVEL,
    OUTPUT_FORMATS,
    REPORT_DIR,
    SessionConfig,
    field_name,
)
from corner_skew import cs_witness, realize_lpa
from errors import ConfigError, LpaError
from graph import format_graph, load_graph
from lpa import LeavittPathAlgebra
from regularity import (
    find_witness,
    find_witness_unrestricted,
    idempotent_generator,
    regularity_suite,
)
from report_store import ReportStore
from transforms import (
    Embedding,
    desingularize,
    matrix_degree,
    matrix_ring,
    remove_all_sources,
    remove_source,
    transport_witness,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lpa", description="Exact computations in Leavitt path algebras of finite graphs."
    )
    parser.add_argument("--graph", required=True, help="graph file")
    parser.add_argument("--field", default=DEFAULT_FIELD, help="q or fp:<p>")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--len-cap", type=int, default=DEFAULT_LEN_CAP)
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=DEFAULT_FORMAT)
    parser.add_argument("--timings", action="store_true", help="include timings in json suite output")
    parser.add_argument("--report-dir", default=REPORT_DIR)
    parser.add_argument("--generated", action="store_true", help="accept ~tail: identifiers")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("normalize").add_argument("element")
    mul = commands.add_parser("mul")
    mul.add_argument("left")
    mul.add_argument("right")
    commands.add_parser("degree").add_argument("element")
    for name in ("witness", "witness-any"):
        sub = commands.add_parser(name)
        sub.add_argument("element")
        sub.add_argument("--start-bound", type=int)
        sub.add_argument("--max-bound", type=int)
    idgen = commands.add_parser("idgen")
    idgen.add_argument("elements", nargs="+")
    idgen.add_argument("--bound", type=int)
    suite = commands.add_parser("suite")
    suite.add_argument("--trials", type=int, default=50)
    suite.add_argument("--terms", type=int, default=3)
    desource = commands.add_parser("desource")
    desource.add_argument("--vertex")
    desource.add_argument("--out")
    desing = commands.add_parser("desing")
    desing.add_argument("--depth", type=int, required=True)
    desing.add_argument("--out")
    corner = commands.add_parser("corner")
    corner.add_argument("action", choices=("realize", "witness"))
    corner.add_argument("element", nargs="?")
    matrix = commands.add_parser("matrix")
    matrix.add_argument("action", choices=("degree", "transport"))
    matrix.add_argument("--shifts", required=True, help="comma-separated integers, e.g. 0,1")
    matrix.add_argument(
        "--entry", nargs=3, action="append", metavar=("I", "J", "ELEMENT"), default=[],
        help="1-based entry; may be repeated",
    )
    return parser


class Session:
    """The loaded graph and algebra plus output helpers for one invocation."""

    def __init__(self, config, args):
        self.config = config
        self.args = args
        graph, self.graph_md5 = load_graph(config.graph_path, allow_reserved=args.generated)
        self.algebra = LeavittPathAlgebra(graph, config.field)

    def parse(self, text):
        return self.algebra.parse(text)

    def emit(self, payload, text):
        if self.config.output_format == "json":
            payload = {"graph_md5": self.graph_md5, "field": field_name(self.config.field), **payload}
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            print(text)


def write_transform(out, graph, embedding):
    """Writes the graph file and its ``<out>.map`` sidecar."""
    with open(out, "w", encoding="utf-8") as f:
        f.write(format_graph(graph))
    with open(f"{out}.map", "w", encoding="utf-8") as f:
        f.write("\n".join(embedding.map_lines()) + "\n")
    logging.info(f"Wrote {out} and {out}.map")


def transform_text(graph, embedding):
    return format_graph(graph) + "---\n" + "\n".join(embedding.map_lines())


def cmd_normalize(session):
    x = session.parse(session.args.element)
    session.emit({"command": "normalize", "element": str(x)}, str(x))
    return 0


def cmd_mul(session):
    x = session.parse(session.args.left) * session.parse(session.args.right)
    session.emit({"command": "mul", "element": str(x)}, str(x))
    return 0


def cmd_degree(session):
    degree = session.parse(session.args.element).degree()
    session.emit({"command": "degree", "degree": degree}, str(degree))
    return 0


def cmd_witness(session):
    args = session.args
    x = session.parse(args.element)
    search = find_witness if args.command == "witness" else find_witness_unrestricted
    report = search(x, args.start_bound, args.max_bound)
    status = "VERIFIED" if report.verified else "FAILED"
    session.emit(
        {
            "command": args.command,
            "x": str(report.x),
            "y": str(report.y),
            "solved_at_bound": report.solved_at_bound,
            "length_bound": report.length_bound,
            "verified": report.verified,
        },
        f"y = {report.y}\nbound = {report.solved_at_bound}\n{status}",
    )
    return 0 if report.verified else 1


def cmd_idgen(session):
    xs = [session.parse(text) for text in session.args.elements]
    certificate = idempotent_generator(xs, session.args.bound)
    multipliers = [str(a) for a in certificate.membership_out]
    lines = [f"e = {certificate.e}"]
    lines += [f"a{i + 1} = {a}" for i, a in enumerate(multipliers)]
    lines.append("VERIFIED" if certificate.verified else "FAILED")
    session.emit(
        {
            "command": "idgen",
            "generators": [str(x) for x in xs],
            "e": str(certificate.e),
            "membership_out": multipliers,
            "verified": certificate.verified,
        },
        "\n".join(lines),
    )
    return 0 if certificate.verified else 1


def cmd_suite(session):
    config, args = session.config, session.args
    if config.seed is None:
        raise ConfigError("suite needs an explicit --seed")
    report = regularity_suite(session.algebra, args.trials, args.terms, config.len_cap, config.seed)
    payload = {"command": "suite", **report.to_dict(include_timings=args.timings)}
    session.emit(payload, report.to_text())
    if args.report_dir:
        store = ReportStore(args.report_dir)
        store.save_report(f"suite-{field_name(config.field).replace(':', '')}-{config.seed}", payload)
    return 0 if report.passed else 1


def cmd_desource(session):
    args = session.args
    graph = session.algebra.graph
    if not args.vertex and not graph.sources():
        session.emit({"command": "desource", "moves": []}, "no sources")
        return 0
    if args.vertex:
        removal = remove_source(session.algebra, args.vertex)
        new_graph, embedding = removal.graph, removal.embedding
        moves = [{"kind": "source", "vertex": args.vertex}]
        certificate = {f: str(term) for f, term in removal.certificate.items()}
    else:
        new_graph, log = remove_all_sources(graph)
        smaller = LeavittPathAlgebra(new_graph, session.algebra.field)
        embedding = Embedding.inclusion(smaller, session.algebra)
        moves = [{"kind": m.kind, "vertex": m.vertex} for m in log]
        certificate = {}
    if args.out:
        write_transform(args.out, new_graph, embedding)
    text = "\n".join(f"{m['kind']} {m['vertex']}" for m in moves)
    if not args.out:
        text += "\n" + transform_text(new_graph, embedding)
    session.emit(
        {
            "command": "desource",
            "moves": moves,
            "graph": format_graph(new_graph),
            "map": embedding.map_lines(),
            "certificate": certificate,
        },
        text,
    )
    return 0


def cmd_desing(session):
    args = session.args
    result = desingularize(session.algebra, args.depth)
    if args.out:
        write_transform(args.out, result.graph, result.embedding)
        text = f"wrote {args.out}"
    else:
        text = transform_text(result.graph, result.embedding)
    session.emit(
        {
            "command": "desing",
            "depth": args.depth,
            "graph": format_graph(result.graph),
            "map": result.embedding.map_lines(),
            "edge_degrees": result.edge_degrees.weights,
        },
        text,
    )
    return 0


def cmd_corner(session):
    args = session.args
    realization = realize_lpa(session.algebra)
    if args.action == "realize":
        chosen = realization.chosen_edges
        session.emit(
            {
                "command": "corner realize",
                "chosen_edges": chosen,
                "t_plus": str(realization.t_plus),
                "t_minus": str(realization.t_minus),
                "p": str(realization.ring.p),
            },
            f"t+ = {realization.t_plus}\nt- = {realization.t_minus}\np = {realization.ring.p}",
        )
        return 0
    if not args.element:
        raise ConfigError("corner witness needs an element")
    x = session.parse(args.element)
    a = realization.from_lpa(x)
    y = realization.to_lpa(cs_witness(a, realization.zero_witness))
    verified = x * y * x == x
    session.emit(
        {"command": "corner witness", "a": str(a), "y": str(y), "verified": verified},
        f"a = {a}\ny = {y}\n{'VERIFIED' if verified else 'FAILED'}",
    )
    return 0 if verified else 1


def _parse_shifts(text):
    try:
        return [int(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"invalid shifts {text!r}") from None


def cmd_matrix(session):
    args = session.args
    ring = matrix_ring(session.algebra, len(_parse_shifts(args.shifts)), _parse_shifts(args.shifts))
    entries = {}
    for i, j, text in args.entry:
        try:
            key = (int(i), int(j))
        except ValueError:
            raise ConfigError(f"invalid entry index {i} {j}") from None
        entries[key] = session.parse(text)
    m = ring.matrix(entries)
    if args.action == "degree":
        degree = matrix_degree(m)
        session.emit({"command": "matrix degree", "degree": degree}, str(degree))
        return 0
    y = transport_witness(m, lambda a: find_witness(a).y)
    session.emit({"command": "matrix transport", "y": str(y), "verified": True}, f"y = {y}\nVERIFIED")
    return 0


COMMANDS = {
    "normalize": cmd_normalize,
    "mul": cmd_mul,
    "degree": cmd_degree,
    "witness": cmd_witness,
    "witness-any": cmd_witness,
    "idgen": cmd_idgen,
    "suite": cmd_suite,
    "desource": cmd_desource,
    "desing": cmd_desing,
    "corner": cmd_corner,
    "matrix": cmd_matrix,
}


def main(argv=None):
    """Main execution entry point.

    Parses the command line, loads the graph and runs one subcommand.

    Returns:
        int: 0 on success, 1 for a checked failure, 2 for usage and parse errors.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    try:
        config = SessionConfig.from_args(args)
        session = Session(config, args)
        logging.info(f"Running {args.command} on {os.path.basename(config.graph_path)}")
        return COMMANDS[args.command](session)
    except LpaError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logging.error(f"Fatal error in main: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
