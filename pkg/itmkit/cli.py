#!/usr/bin/env python
#
# Copyright 2019-2020 Flavio Garcia
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
The command line interface.
"""
from . import get_version
from .convert import convert_double_rotation, dr_to_piecewise, split
from .dot import export_dot
from .errors import AccelFailure, ItmkitError, UsageError
from .experiments import (BoxDimConfig, CHECKPOINTS, DEFAULT_DEPTH,
                          DEFAULT_PRECISION, DEFAULT_RESOLUTIONS,
                          SURVIVOR_THRESHOLD, SweepConfig, accel_suite,
                          boxdim, classify_one, oracle_suite, render_slice,
                          sweep)
from .helpers import format_scalar, parse_scalar
from .induction import (DEFAULT_ACCEL_CAP, check_acceleration, iterate,
                        z_iterate)
from .intervals import DEFAULT_MAX_PIECES, DEFAULT_MAX_STEPS, orbit
from .model import DoubleRotation, ITMPermutation
from .simplicial import (DEFAULT_GRAPH_CAP, SimplicialSystem, build_graph,
                         prune, verify_strongly_nondegenerating)

import argparse
from cartola import fs, sysexits
import logging
import sys

logger = logging.getLogger(__name__)

# Text
DESCRIPTION = \
"""
itmkit {}.

Double rotations and 3-interval translation maps: classification, Rauzy
type renormalization, the induction graph with its simplicial system, and
parameter space experiments. Every number is an exact rational; pass them as
p/q, integers or finite decimals.
""".format(get_version())

DESCRIPTION_CLASSIFY = \
"""
Classifies the double rotation y -> y + alpha on [0, c), y -> y + beta on
[c, 1) as finite type, degenerate or a survivor of --depth renormalization
steps. The nested image iteration runs next to it unless --no-attractor is
given, and a disagreement between the two aborts the command.
"""

DESCRIPTION_ORBIT = \
"""
Prints the first --steps points of the forward orbit of --x, one per line.
"""

DESCRIPTION_INDUCE = \
"""
Runs the R-induction (--scheme r) or the Z-induction (--scheme z) on a
double rotation, or the R-induction on a permutation file given with
--permutation. The R-induction writes its step log. With --check every step
is compared against the first return map.

With --samples the command instead checks that many random states built on
the two seed permutations, every step against the first return map.
"""

DESCRIPTION_ACCEL_CHECK = \
"""
Checks that one Z-step equals a finite number of right R-steps, either for
the 3-ITM of a double rotation or for --samples random 3-ITMs. Exits with 1
when a check fails.
"""

DESCRIPTION_GRAPH = \
"""
Builds the induction graph G from the two seed permutations and writes it as
a graph document or as DOT. --pruned writes F instead of G.
"""

DESCRIPTION_VERIFY = \
"""
Checks that F is strongly non-degenerating and prints the report. Exits with
1 unless the verdict is PASS. A graph document written by the graph command can
be given with --graph.
"""

DESCRIPTION_SWEEP = \
"""
Classifies --samples dyadic double rotations drawn from a seeded generator
and writes one CSV row per sample plus summary rows with survivor fractions
at the checkpoint depths {}.
""".format(", ".join(str(depth) for depth in CHECKPOINTS))

DESCRIPTION_BOXDIM = \
"""
Counts the boxes of the 2^k grid on the parameter cube holding a survivor of
--depth steps and fits the slope of log2 N(k) against k. The count covers a
superset of the infinite type parameters, so the slope is an upper bound
proxy, not a dimension.
"""

DESCRIPTION_RENDER = \
"""
Writes the slice at --c of the parameter cube as a binary PGM raster: alpha
along the columns, beta along the rows. Survivors are black, degenerate
rotations white, finite types grey by steps used.
"""


def _emit(args, data):
    if args.out:
        fs.write(args.out, data)
        logger.info("Wrote %s.", args.out)
    else:
        sys.stdout.write(data)


def _arguments(factory, *args, **kwargs):
    """ Build ``factory`` from command line values; a ValueError it raises
    is a usage error.
    """
    try:
        return factory(*args, **kwargs)
    except ValueError as e:
        raise UsageError(e)


def _rotation(args):
    if args.alpha is None or args.beta is None or args.c is None:
        raise UsageError("Give --alpha, --beta and --c.")
    return _arguments(DoubleRotation, args.alpha, args.beta, args.c)


# Command handlers
def _classify(args):
    cfg = _arguments(SweepConfig, sample_count=0, depth=args.depth,
                     max_steps=args.max_steps, max_pieces=args.max_pieces,
                     cross_check=not args.no_attractor)
    d = _rotation(args)
    record = classify_one(d, cfg)
    lines = ["rotation: {}".format(d.serialize()),
             "outcome: {}".format(record.outcome),
             "steps: {}".format(record.steps)]
    if record.detail:
        lines.append("detail: {}".format(record.detail))
    if record.attractor is not None:
        lines.append("attractor: {!r}".format(record.attractor))
    _emit(args, "\n".join(lines) + "\n")


def _orbit(args):
    points = orbit(dr_to_piecewise(_rotation(args)), args.x % 1, args.steps)
    _emit(args, "".join("{}\n".format(format_scalar(point))
                        for point in points))


def _induce(args):
    if args.samples:
        report = oracle_suite(args.samples, args.seed, args.depth)
        _emit(args, report.summary())
        return 0 if report.ok else sysexits.EX_CATCHALL
    if args.permutation:
        p = ITMPermutation.deserialize(fs.read(args.permutation))
        _emit(args, iterate(p, args.depth, check=args.check).serialize())
        return 0
    m = convert_double_rotation(_rotation(args)).itm
    if args.scheme == "z":
        outcomes, stop = z_iterate(m, args.depth)
        lines = ["{!r}".format(outcome) for outcome in outcomes]
        if stop is not None:
            lines.append("stop: {}".format(stop))
        _emit(args, "".join("{}\n".format(line) for line in lines))
        return 0
    _emit(args, iterate(split(m), args.depth, check=args.check).serialize())
    return 0


def _accel_check(args):
    if args.samples:
        report = accel_suite(args.samples, args.seed, args.cap)
        _emit(args, report.summary())
        return 0 if report.ok else sysexits.EX_CATCHALL
    m = convert_double_rotation(_rotation(args)).itm
    try:
        report = check_acceleration(m, args.cap)
    except AccelFailure as e:
        logger.error(e)
        return sysexits.EX_CATCHALL
    _emit(args, "n: {}\nwinner: {}\n".format(report.n, report.winner))
    return 0


def _graph(args):
    system = build_graph(cap=args.cap)
    logger.info("G: %s vertices, %s edges, %s into the rotation terminal.",
                len(system.vertices), len(system.edges),
                len(system.rotation_edges))
    if args.pruned:
        system = prune(system)
        logger.info("F: %s vertices, %s edges.", len(system.vertices),
                    len(system.edges))
    for shape, count in system.shape_counts().items():
        logger.debug("shape %s: %s vertices", shape, count)
    if args.format == "dot":
        _emit(args, export_dot(system))
    else:
        _emit(args, system.serialize())


def _verify(args):
    if args.graph:
        system = SimplicialSystem.deserialize(fs.read(args.graph))
    else:
        system = build_graph(cap=args.cap)
    if not system.pruned:
        system = prune(system)
    report = verify_strongly_nondegenerating(system)
    _emit(args, report.summary())
    return 0 if report.passed else sysexits.EX_CATCHALL


def _sweep(args):
    cfg = _arguments(SweepConfig, sample_count=args.samples,
                     depth=args.depth, rng_seed=args.seed,
                     dyadic_precision=args.precision)
    result = sweep(cfg)
    if (cfg.depth >= CHECKPOINTS[-1] and result.records and
            result.fraction(CHECKPOINTS[-1]) >= SURVIVOR_THRESHOLD):
        logger.warning("Survivor fraction at depth %s is above %s.",
                       CHECKPOINTS[-1], SURVIVOR_THRESHOLD)
    _emit(args, result.to_csv())


def _boxdim(args):
    cfg = _arguments(BoxDimConfig, resolutions=args.k, depth=args.depth,
                     dyadic_precision=args.precision)
    _emit(args, boxdim(cfg).to_csv())


def _render(args):
    if not 0 < args.c < 1 or args.resolution < 1:
        raise UsageError("The slice needs 0 < c < 1 and a positive "
                         "resolution.")
    raster = render_slice(args.c, args.resolution, args.depth)
    fs.write(args.out, raster, binary=True)
    logger.info("Wrote %s.", args.out)


def _version(args):
    sys.stdout.write("itmkit {}\n".format(get_version()))


class Formatter(argparse.ArgumentDefaultsHelpFormatter,
                argparse.RawDescriptionHelpFormatter):
    pass


def _scalar(value):
    try:
        return parse_scalar(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            "'{}' is not an exact rational".format(value))


def _natural(value):
    try:
        number = int(value)
    except ValueError:
        number = -1
    if number < 0:
        raise argparse.ArgumentTypeError(
            "'{}' is not a non negative integer".format(value))
    return number


def _add_rotation(parser, required=True):
    parser.add_argument('--alpha', type=_scalar, required=required,
                        help="Rotation angle on [0, c)")
    parser.add_argument('--beta', type=_scalar, required=required,
                        help="Rotation angle on [c, 1)")
    parser.add_argument('--c', type=_scalar, required=required,
                        help="Cut point")


def _add_out(parser):
    parser.add_argument('--out', '-o', help="Output file, stdout if omitted")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="itmkit",
        description=DESCRIPTION,
        formatter_class=Formatter,
    )
    subparsers = parser.add_subparsers()

    # Verbosity
    parser.add_argument('--verbose', '-v', action="count",
                        help="Set verbose mode", default=0)

    classify = subparsers.add_parser(
        'classify',
        help="Classify a double rotation",
        description=DESCRIPTION_CLASSIFY,
        formatter_class=Formatter,
    )
    _add_rotation(classify)
    classify.add_argument('--depth', type=int, default=DEFAULT_DEPTH,
                          help="Renormalization steps before giving up")
    classify.add_argument('--max-steps', type=int, default=DEFAULT_MAX_STEPS,
                          help="Image iterations of the attractor check")
    classify.add_argument('--max-pieces', type=int,
                          default=DEFAULT_MAX_PIECES,
                          help="Pieces allowed in the attractor check")
    classify.add_argument('--no-attractor', action='store_true',
                          help="Skip the nested image iteration")
    _add_out(classify)
    classify.set_defaults(func=_classify)

    orbit_parser = subparsers.add_parser(
        'orbit',
        help="Print the orbit of a point",
        description=DESCRIPTION_ORBIT,
        formatter_class=Formatter,
    )
    _add_rotation(orbit_parser)
    orbit_parser.add_argument('--x', type=_scalar, default=0,
                              help="Starting point")
    orbit_parser.add_argument('--steps', type=_natural, default=10,
                              help="Number of iterations")
    _add_out(orbit_parser)
    orbit_parser.set_defaults(func=_orbit)

    induce = subparsers.add_parser(
        'induce',
        help="Run the R- or Z-induction",
        description=DESCRIPTION_INDUCE,
        formatter_class=Formatter,
    )
    _add_rotation(induce, required=False)
    induce.add_argument('--permutation', '-p',
                        help="ITM permutation file to start from")
    induce.add_argument('--scheme', choices=('r', 'z'), default='r',
                        help="Induction scheme")
    induce.add_argument('--depth', type=_natural, default=DEFAULT_DEPTH,
                        help="Maximum number of steps")
    induce.add_argument('--check', action='store_true',
                        help="Check every step against the first return")
    induce.add_argument('--samples', type=int, default=0,
                        help="Check this many random states instead")
    induce.add_argument('--seed', type=int, default=0,
                        help="Seed of the random states")
    _add_out(induce)
    induce.set_defaults(func=_induce)

    accel = subparsers.add_parser(
        'accel-check',
        help="Check the Z-step against the R-path",
        description=DESCRIPTION_ACCEL_CHECK,
        formatter_class=Formatter,
    )
    _add_rotation(accel, required=False)
    accel.add_argument('--cap', type=int, default=DEFAULT_ACCEL_CAP,
                       help="Maximum number of R-steps")
    accel.add_argument('--samples', type=int, default=0,
                       help="Check this many random 3-ITMs instead")
    accel.add_argument('--seed', type=int, default=0,
                       help="Seed of the random 3-ITMs")
    _add_out(accel)
    accel.set_defaults(func=_accel_check)

    graph = subparsers.add_parser(
        'graph',
        help="Enumerate the induction graph",
        description=DESCRIPTION_GRAPH,
        formatter_class=Formatter,
    )
    graph.add_argument('--format', choices=('text', 'dot'), default='text',
                       help="Output format")
    graph.add_argument('--pruned', action='store_true',
                       help="Write F instead of G")
    graph.add_argument('--cap', type=int, default=DEFAULT_GRAPH_CAP,
                       help="Maximum number of vertices")
    _add_out(graph)
    graph.set_defaults(func=_graph)

    verify = subparsers.add_parser(
        'verify',
        help="Verify that F is strongly non-degenerating",
        description=DESCRIPTION_VERIFY,
        formatter_class=Formatter,
    )
    verify.add_argument('--graph', '-g', help="Graph document to verify")
    verify.add_argument('--cap', type=int, default=DEFAULT_GRAPH_CAP,
                        help="Maximum number of vertices")
    _add_out(verify)
    verify.set_defaults(func=_verify)

    sweep_parser = subparsers.add_parser(
        'sweep',
        help="Seeded parameter sweep",
        description=DESCRIPTION_SWEEP,
        formatter_class=Formatter,
    )
    sweep_parser.add_argument('--samples', type=int, default=1000,
                              help="Number of samples")
    sweep_parser.add_argument('--depth', type=int, default=DEFAULT_DEPTH,
                              help="Renormalization steps per sample")
    sweep_parser.add_argument('--seed', type=int, default=0,
                              help="Generator seed")
    sweep_parser.add_argument('--precision', type=int,
                              default=DEFAULT_PRECISION,
                              help="Samples are p/2^precision")
    _add_out(sweep_parser)
    sweep_parser.set_defaults(func=_sweep)

    boxdim_parser = subparsers.add_parser(
        'boxdim',
        help="Box counting estimate of the survivor set",
        description=DESCRIPTION_BOXDIM,
        formatter_class=Formatter,
    )
    boxdim_parser.add_argument('--k', type=int, nargs='+',
                               default=list(DEFAULT_RESOLUTIONS),
                               help="Grid exponents")
    boxdim_parser.add_argument('--depth', type=int, default=DEFAULT_DEPTH,
                               help="Renormalization steps per sample point")
    boxdim_parser.add_argument('--precision', type=int,
                               default=DEFAULT_PRECISION,
                               help="Corner points stay 2^-precision inside")
    _add_out(boxdim_parser)
    boxdim_parser.set_defaults(func=_boxdim)

    render = subparsers.add_parser(
        'render',
        help="Render a parameter slice",
        description=DESCRIPTION_RENDER,
        formatter_class=Formatter,
    )
    render.add_argument('--c', type=_scalar, required=True,
                        help="Cut point of the slice")
    render.add_argument('--resolution', type=int, default=256,
                        help="Pixels per side")
    render.add_argument('--depth', type=_natural, default=DEFAULT_DEPTH,
                        help="Renormalization steps per pixel")
    render.add_argument('--out', '-o', required=True, help="Raster file")
    render.set_defaults(func=_render)

    version = subparsers.add_parser("version", help="Show the version number")
    version.set_defaults(func=_version)
    return parser


# Where it all begins.
def itmkit_main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, 'func'):
        parser.print_help()
        sys.exit(sysexits.EX_MISUSE)

    # Set up logging
    root = logging.getLogger('itmkit')
    root.setLevel(logging.DEBUG if args.verbose > 0 else logging.INFO)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(handler)

    try:
        code = args.func(args)
    except UsageError as e:
        logger.error(e)
        sys.exit(sysexits.EX_MISUSE)
    except ItmkitError as e:
        logger.error(e)
        sys.exit(sysexits.EX_SOFTWARE)
    except ValueError as e:
        logger.error(e)
        sys.exit(sysexits.EX_SOFTWARE)
    except IOError as e:
        logger.error(e)
        sys.exit(sysexits.EX_SOFTWARE)
    except KeyboardInterrupt:
        logger.error("")
        logger.error("Interrupted.")
        sys.exit(sysexits.EX_TERMINATED_BY_CRTL_C)
    except Exception as e:
        logger.error("Oops! An unhandled error occurred. Please file a bug.")
        logger.exception(e)
        sys.exit(sysexits.EX_CATCHALL)
    sys.exit(code or sysexits.EX_OK)
