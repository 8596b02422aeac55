# Copyright 2026 Justin Cook
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Main entry point for the mgc CLI.
"""

import argparse
import logging
import sys
from collections import deque
from pathlib import Path

import numpy as np

from matchgate_net.errors import MatchgateError, NotMatchgateError
from matchgate_net.gadgets import compile_matchsum
from matchgate_net.generators import (gen_ising_network, gen_matching_network, gen_random_network,
                                      grid_graph, torus_grid_graph)
from matchgate_net.genus import contract_single_vertex_bruteforce, genus_contraction
from matchgate_net.matchgate import canonicalize, check_lambda, check_matchgate, densify
from matchgate_net.pipeline import agrees, contract
from matchgate_net.planar import kasteleyn_orient
from matchgate_net.serialization import (decode_complex, encode_complex, graph_to_json, network_from_json,
                                         network_to_json, pairing_from_json, read_json, report_to_json,
                                         tensor_from_json, write_json)
from matchgate_net.settings import get_log_dir, get_tolerance, set_log_dir_override, set_tolerance_override

logger = logging.getLogger(__name__)


class StatusLogHandler(logging.Handler):
    """
    Keeps the last N log lines for a scrolling rich status display.
    """
    def __init__(self, console, maxlen=5):
        super().__init__()
        self.console = console
        self.maxlen = maxlen
        self.logs = deque(maxlen=maxlen)
        self.live = None

    def emit(self, record):
        try:
            msg = self.format(record)
            self.logs.append(msg)
            if self.live:
                self.live.update(self.get_renderable())
        except Exception:
            self.handleError(record)

    def get_renderable(self):
        from rich.text import Text
        return Text("\n".join(self.logs), style="dim grey50")


def setup_logging(verbosity: int, quiet: bool = False, custom_handler: logging.Handler = None):
    """
    Configures logging:
    - File: <log dir>/mgc.log (DEBUG)
    - Console: 0=ERROR, -v=WARNING, -vv=INFO, -vvv=DEBUG; -q=ERROR
    """
    log_dir = Path(get_log_dir())
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / "mgc.log"

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    root.addHandler(file_handler)

    if quiet or verbosity == 0:
        level = logging.ERROR
    elif verbosity == 1:
        level = logging.WARNING
    elif verbosity == 2:
        level = logging.INFO
    else:
        level = logging.DEBUG

    handler = custom_handler or logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter('%(message)s'))
    root.addHandler(handler)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgc", description="Exact contraction of matchgate tensor networks")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="Increase output verbosity (-v=WARNING, -vv=INFO, -vvv=DEBUG)")
    parser.add_argument("-q", "--quiet", action="store_true", help="Suppress status output (ERROR only)")
    parser.add_argument("--log-dir", help="Directory for mgc.log (default: $MGC_LOG_DIR or ./logs)")
    parser.add_argument("--tol", type=float, help="Relative tolerance for matchgate checks (default: $MGC_TOL or 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contract", help="Contract a closed network to its value c(T)")
    p.add_argument("network", help="Network JSON file")
    p.add_argument("--report", help="Write a JSON contraction report here")
    p.add_argument("--bruteforce-check", action="store_true", help="Compare against the brute-force sum")
    p.add_argument("--sequential", action="store_true", help="Use pairwise contraction (genus 0, no cut)")

    p = sub.add_parser("check", help="Check the matchgate identities of a tensor")
    p.add_argument("tensor", help="Tensor JSON file")
    p.add_argument("--lambda", dest="use_lambda", action="store_true", help="Also run the Lambda-operator criterion")

    p = sub.add_parser("compile-matchsum", help="Compile a matchgate into a planar matching-sum graph")
    p.add_argument("tensor", help="Tensor JSON file")
    p.add_argument("-o", "--output", required=True, help="Graph JSON output")

    p = sub.add_parser("genus", help="Self-contract a single vertex along a chord pairing")
    p.add_argument("tensor", help="Tensor JSON file (rank 2m)")
    p.add_argument("pairing", help="Pairing JSON file")
    p.add_argument("--genus", type=int, help="Assert at most 2^(2g) Pfaffian terms")
    p.add_argument("--bruteforce-check", action="store_true", help="Compare against the 2^(2m)-term sum")

    p = sub.add_parser("gen", help="Generate a network instance")
    p.add_argument("kind", choices=["matching", "ising", "random"])
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.add_argument("--torus", action="store_true", help="Wrap the grid onto a torus (genus 1)")
    p.add_argument("--beta", type=float, default=0.5, help="Ising coupling scale")
    p.add_argument("--shape", choices=["planar", "torus"], default="planar", help="Random network shape")
    p.add_argument("--size", type=int, default=6, help="Random network size")
    p.add_argument("--seed", type=int, help="Random seed; weights/couplings are random when given")
    p.add_argument("-o", "--output", required=True, help="Network JSON output")
    return parser


def main():
    try:
        _main_cli()
    except KeyboardInterrupt:
        sys.stderr.write("\n\033[31m[-] Cancelled by user\033[0m\n")
        sys.exit(130)


def _main_cli(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.log_dir:
        set_log_dir_override(args.log_dir)
    if args.tol is not None:
        set_tolerance_override(args.tol)

    if args.quiet:
        setup_logging(0, quiet=True)
        _run_main_logic(args)
    elif args.verbose == 0:
        try:
            from rich.console import Console
            from rich.live import Live

            console = Console(stderr=True)
            status_handler = StatusLogHandler(console)
            setup_logging(2, custom_handler=status_handler)
            with Live(status_handler.get_renderable(), refresh_per_second=4, console=console,
                      transient=True) as live:
                status_handler.live = live
                logger.info("--- mgc ---")
                _run_main_logic(args)
        except ImportError:
            setup_logging(args.verbose)
            _run_main_logic(args)
    else:
        setup_logging(args.verbose)
        logger.info("--- mgc ---")
        _run_main_logic(args)


def _run_main_logic(args):
    try:
        handlers = {
            "contract": _cmd_contract,
            "check": _cmd_check,
            "compile-matchsum": _cmd_compile,
            "genus": _cmd_genus,
            "gen": _cmd_gen,
        }
        handlers[args.command](args)
    except MatchgateError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.exit(e.exit_code)
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        sys.exit(1)


def _format(z: complex) -> str:
    return f"{z.real:.12g}" if abs(z.imag) <= 1e-12 * max(abs(z), 1.0) else f"{z:.12g}"


def _cmd_contract(args):
    logger.info(f"Loading network from: {args.network}")
    data = read_json(args.network)
    net = network_from_json(data)
    report = contract(net, bruteforce_check=args.bruteforce_check, sequential=args.sequential)
    print(_format(report.value))
    if "prefactor" in data:
        print(f"with prefactor: {_format(decode_complex(data['prefactor']) * report.value)}")
    if args.report:
        write_json(args.report, report_to_json(report))
    if report.bruteforce_value is not None:
        print(f"bruteforce: {_format(report.bruteforce_value)}")
        if not agrees(report.value, report.bruteforce_value):
            logger.error("Contraction value disagrees with brute force")
            sys.exit(1)


def _cmd_check(args):
    tensor = tensor_from_json(read_json(args.tensor))
    dense = densify(tensor)
    result = check_matchgate(dense, get_tolerance())
    logger.info(f"Worst identity residual {result.worst:.3e} at scale {result.scale:.3e}")
    if args.use_lambda:
        lam = check_lambda(dense)
        if lam != result.ok:
            logger.warning(f"Identity check ({result.ok}) and Lambda criterion ({lam}) disagree")
        if not lam:
            raise NotMatchgateError("Tensor fails the Lambda-operator criterion")
    if not result.ok:
        raise NotMatchgateError(f"Tensor violates the matchgate identities (residual {result.worst:.3e})")
    print("matchgate")


def _cmd_compile(args):
    M = canonicalize(tensor_from_json(read_json(args.tensor)))
    compiled = compile_matchsum(M, with_prefactor=False)
    graph = compiled.graph
    ko = kasteleyn_orient(graph)
    orientation = [int(s) for s in ko.orientation]
    u, v = graph.add_vertex(), graph.add_vertex()
    graph.add_edge(u, v, M.C * M.parity.sign)
    orientation.append(1)
    logger.info(f"Compiled rank-{M.n} matchgate into {graph.n_vertices} vertices, {len(graph.edges)} edges")
    write_json(args.output, graph_to_json(graph, orientation))


def _cmd_genus(args):
    tensor = tensor_from_json(read_json(args.tensor))
    pairing = pairing_from_json(read_json(args.pairing))
    result = genus_contraction(tensor, pairing, args.genus)
    print(_format(result.value))
    logger.info(f"Intersection rank {result.rank}, {result.terms} Pfaffian term(s)")
    if args.bruteforce_check:
        oracle = contract_single_vertex_bruteforce(tensor, pairing)
        print(f"bruteforce: {_format(oracle)}")
        if not agrees(result.value, oracle):
            logger.error("Genus-stage value disagrees with brute force")
            sys.exit(1)


def _cmd_gen(args):
    rng = np.random.default_rng(args.seed)
    if args.kind == "random":
        net = gen_random_network(args.shape, args.size, rng)
        write_json(args.output, network_to_json(net))
        return
    build = torus_grid_graph if args.torus else grid_graph
    graph = build(args.rows, args.cols)
    if args.kind == "matching":
        if args.seed is not None:
            graph.weights = [complex(w) for w in rng.uniform(0.5, 1.5, len(graph.edges))]
        write_json(args.output, network_to_json(gen_matching_network(graph)))
        return
    couplings = [args.beta] * len(graph.edges)
    if args.seed is not None:
        couplings = list(args.beta * rng.uniform(0.5, 1.5, len(graph.edges)))
    net, prefactor = gen_ising_network(graph, couplings)
    data = network_to_json(net)
    data["prefactor"] = encode_complex(prefactor)
    write_json(args.output, data)
    print(f"prefactor: {_format(prefactor)}")
