"""
Command-line front end.

Every subcommand writes one canonical JSON report (CSV for ``ensemble``)
embedding the package version, the seed and a hash of the run
configuration, so that identical invocations produce identical bytes.

Exit codes: 0 pass, 1 usage or configuration error, 2 an inequality ratio
above ``--max-ratio``, 3 a witness (vanishing polynomial, uncovered
direction) was found.
"""

import argparse
import logging
import sys

from . import __version__
from ._config import lab_config
from ._utils import parse_count
from .amplify import amplify, choose_M, collision_stats
from .exceptions import BadParameters, KakeyaLabError
from .gf import field_from_order, field_make
from .hashing import canonical_json, hash
from .logger import PrintTime, configure_logging
from .maximal import (THEOREMS, check_kplane_region, check_shoop_region,
                      random_point_function, ratio_ensemble, ratio_report)
from .geometry import points_array
from .polymethod import (MultiplicityFunction, build_kplane_kakeya,
                         find_vanishing_poly, kakeya_line_check,
                         kplane_bound, kplane_kakeya_check,
                         refutation_diagnostics)
from .rings import (RingSpec, first_missing_ring_direction,
                    ring_bound_check, ring_direction_count,
                    ring_points_array, search_small_kakeya)
from .serialization import (ensemble_csv, read_point_function,
                            read_point_set, read_ring_set, write_report)
from .disk import atomic_write

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDING = 2
EXIT_WITNESS = 3

# Arguments that do not change the content of a report.
_UNHASHED = ('output', 'verbose', 'timing', 'timing_log', 'threads', 'func')


class UsageError(BadParameters):
    """Invalid command-line arguments."""


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


###############################################################################
# Helpers

def _field(args, required=True):
    if args.q is not None:
        if args.p is not None:
            raise UsageError('give either --q or --p/--m, not both')
        return field_from_order(args.q)
    if args.p is not None:
        return field_make(args.p, args.m or 1)
    if required:
        raise UsageError('the field is not specified (use --q or --p)')
    return None


def _check_same_field(args, field):
    given = _field(args, required=False)
    if given is not None and given != field:
        raise UsageError('%r from the input does not match %r'
                         % (field, given))


def _require(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError('--%s is required' % name.replace('_', '-'))
    return value


def _run_config(args):
    return {k: v for k, v in sorted(vars(args).items())
            if k not in _UNHASHED}


def _envelope(args, report):
    config = _run_config(args)
    return {'version': __version__, 'command': args.command,
            'seed': args.seed, 'config': config,
            'config_hash': hash(config), 'report': report}


def _emit(args, report):
    document = _envelope(args, report)
    if args.output:
        write_report(args.output, document)
    else:
        sys.stdout.write(canonical_json(document))
    return document


###############################################################################
# Subcommands

def cmd_maximal(args):
    theorem = args.theorem
    if theorem == 'shoop' and args.n is not None:
        check_shoop_region(args.n, _require(args, 'pexp'),
                           _require(args, 'qexp'))
    if theorem == 'kplane_conj' and args.n is not None:
        check_kplane_region(args.n, _require(args, 'k'),
                            _require(args, 'pexp'), _require(args, 'qexp'))
    field, n, f = read_point_function(_require(args, 'input'))
    _check_same_field(args, field)
    if args.n is not None and args.n != n:
        raise UsageError('--n %d does not match the input (n = %d)'
                         % (args.n, n))
    params = {}
    if theorem in ('shoop', 'kplane_conj'):
        params.update(p_exp=_require(args, 'pexp'),
                      q_exp=_require(args, 'qexp'))
    if theorem in ('kplane_conj', 'mixedq'):
        params['k'] = _require(args, 'k')
    if theorem in ('kakeq', 'restricted_W', 'nikodym') and args.W:
        W_field, W_n, W = read_point_set(args.W)
        if W_field != field or W_n != n:
            raise UsageError('W lives in another space than f')
        params['W'] = sorted(W)
    elif theorem in ('kakeq', 'restricted_W'):
        raise UsageError('--W is required for %s' % theorem)
    report = ratio_report(f, theorem, keep_witnesses=args.witnesses,
                          **params)
    _emit(args, report)
    if report.ratio > args.max_ratio:
        logger.warning('ratio %r exceeds %r', report.ratio, args.max_ratio)
        return EXIT_FINDING
    return EXIT_OK


def cmd_certify(args):
    field, n, mult = read_point_set(_require(args, 'input'))
    _check_same_field(args, field)
    D = field.q - 1 if args.D is None else args.D
    mult = MultiplicityFunction(field, n, mult)
    cert = find_vanishing_poly(mult, D)
    report = {'certificate': cert, 'size': len(mult),
              'field': field, 'n': n}
    plain = all(m == 1 for m in mult.values.values())
    if args.check_kakeya:
        is_kakeya, missing = kakeya_line_check(mult.values, field, n)
        report['kakeya'] = {'is_kakeya': is_kakeya, 'missing': missing}
    if cert.witness is not None and plain and D < field.q:
        report['diagnostics'] = refutation_diagnostics(mult.values,
                                                       cert.witness)
    _emit(args, report)
    return EXIT_OK if cert.kernel_trivial else EXIT_WITNESS


def cmd_ensemble(args):
    field = _field(args)
    params = {}
    if args.theorem in ('shoop', 'kplane_conj'):
        params.update(p_exp=_require(args, 'pexp'),
                      q_exp=_require(args, 'qexp'))
    if args.theorem in ('kplane_conj', 'mixedq'):
        params['k'] = _require(args, 'k')
    if args.theorem in ('kakeq', 'restricted_W'):
        raise UsageError('ensembles of %s need a variety; use maximal'
                         % args.theorem)
    result = ratio_ensemble(field, _require(args, 'n'), args.theorem,
                            _require(args, 'trials'), args.seed, **params)
    text = ensemble_csv(result)
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _ring(args):
    if args.int_mod:
        p = args.p if args.p is not None else args.q
        if p is None:
            raise UsageError('--int-mod needs --p')
        return RingSpec.int_mod_pk(p, _require(args, 'k'))
    return RingSpec.poly_mod_xk(_field(args), _require(args, 'k'))


def cmd_ring(args):
    ring = _ring(args)
    n = _require(args, 'n')
    report = {'ring': ring, 'n': n,
              'directions': ring_direction_count(ring, n)}
    status = EXIT_OK
    if args.check:
        file_ring, file_n, E = read_ring_set(args.check)
        if file_ring != ring or file_n != n:
            raise UsageError('the point set lives in another space')
        missing = first_missing_ring_direction(E, ring, n)
        report['check'] = {'size': len(E), 'is_kakeya': missing is None,
                           'missing': missing}
        if missing is not None:
            status = EXIT_WITNESS
    if args.check_embed:
        if args.check_embed == 'full':
            E = [tuple(p) for p in ring_points_array(ring, n).tolist()]
        else:
            file_ring, file_n, E = read_ring_set(args.check_embed)
            if file_ring != ring or file_n != n:
                raise UsageError('the point set lives in another space')
        report['embed'] = ring_bound_check(E, ring, n,
                                           certify=args.certify)
    if args.search:
        report['search'] = search_small_kakeya(ring, n, args.search,
                                               args.seed)
    _emit(args, report)
    return status


def cmd_amplify(args):
    if args.input is not None:
        field, n, f = read_point_function(args.input)
        _check_same_field(args, field)
    else:
        field, n = _field(args), _require(args, 'n')
        f = random_point_function(field, n, args.seed)
    report = {}
    M = args.M
    if M is None:
        if args.lam is None:
            raise UsageError('give --M or --lam')
        choice = choose_M(args.lam, f, args.K0)
        report['choose_M'] = {'M': choice.M, 'clamped': choice.clamped,
                              'raw': choice.raw}
        M = choice.M
    anchors = [tuple(p) for p in points_array(field, n - 1)[:args.J]]
    if len(anchors) < args.J:
        raise UsageError('F^%d has fewer than %d points' % (n - 1, args.J))
    instance = amplify(f, anchors, M, args.seed, mode=args.mode)
    report['instance'] = instance
    if args.flatten is not None:
        omega = sorted(instance.omega)
        if not n >= args.flatten >= 2:
            raise UsageError('--flatten needs n >= N_TARGET >= 2')
        report['collisions'] = collision_stats(omega, field, args.flatten,
                                               args.trials or 100, args.seed)
    _emit(args, report)
    return EXIT_OK


def cmd_kplane(args):
    n, k = _require(args, 'n'), _require(args, 'k')
    field = _field(args)
    report = {'n': n, 'k': k, 'q': field.q}
    status = EXIT_OK
    if args.bound:
        bound = kplane_bound(n, k, field)
        report['bound'] = bound
        print(bound.closed_form)
    if args.check:
        file_field, file_n, mult = read_point_set(args.check)
        if file_field != field or file_n != n:
            raise UsageError('the point set lives in another space')
        ok, missing = kplane_kakeya_check(mult, k, field, n)
        report['check'] = {'size': len(mult), 'is_kplane_kakeya': ok,
                           'missing': missing}
        if not ok:
            status = EXIT_WITNESS
    if args.construct:
        E = build_kplane_kakeya(field, n, k)
        ok, missing = kplane_kakeya_check(E, k, field, n)
        if not ok:
            raise BadParameters('construction misses %r' % (missing,))
        report['construct'] = {'size': len(E), 'is_kplane_kakeya': ok}
    if args.output or args.check or args.construct or not args.bound:
        _emit(args, report)
    return status


###############################################################################
# Parser

def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--p', type=int, help='characteristic')
    common.add_argument('--m', type=int, help='extension degree')
    common.add_argument('--q', type=int, help='field order (prime power)')
    common.add_argument('--n', type=int, help='dimension')
    common.add_argument('--k', type=int,
                        help='plane dimension or ring nilpotency index')
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--trials', type=parse_count)
    common.add_argument('--input', '-i', help='input file')
    common.add_argument('--output', '-o', help='report file (default stdout)')
    common.add_argument('--cap-enum', type=parse_count)
    common.add_argument('--cap-matrix', type=parse_count)
    common.add_argument('--threads', type=int,
                        help='worker count, capped by KAKEYA_LAB_THREADS')
    common.add_argument('--verbose', '-v', action='count', default=0)
    common.add_argument('--timing', action='store_true',
                        help='print elapsed time to stderr')
    common.add_argument('--timing-log', help='append timings to this file')
    return common


def _exponent(text):
    return text if text.lower() in ('inf', 'infinity') else float(text)


def build_parser():
    common = _common_parser()
    parser = _Parser(prog='kakeya-lab',
                     description='Finite field Kakeya and Nikodym '
                                 'experiments.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('maximal', parents=[common],
                       help='evaluate a maximal inequality on a function')
    p.add_argument('--theorem', choices=THEOREMS, required=True)
    p.add_argument('--pexp', type=_exponent)
    p.add_argument('--qexp', type=_exponent)
    p.add_argument('--W', help='point-set file of W')
    p.add_argument('--max-ratio', type=float, default=4.0)
    p.add_argument('--witnesses', action='store_true')
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser('certify', parents=[common],
                       help='search for a vanishing polynomial')
    p.add_argument('--D', type=int, help='degree bound (default q - 1)')
    p.add_argument('--check-kakeya', action='store_true')
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser('ensemble', parents=[common],
                       help='ratios over seeded random functions (CSV)')
    p.add_argument('--theorem', choices=THEOREMS, required=True)
    p.add_argument('--pexp', type=_exponent)
    p.add_argument('--qexp', type=_exponent)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser('ring', parents=[common],
                       help='Kakeya sets over F[x]/x^k and Z/p^k')
    p.add_argument('--int-mod', action='store_true',
                   help='use Z/p^k instead of F_q[x]/x^k')
    p.add_argument('--check', metavar='FILE')
    p.add_argument('--check-embed', metavar='FILE',
                   help="ring point-set file, or 'full' for R^n")
    p.add_argument('--certify', action='store_true',
                   help='also certify the embedded set')
    p.add_argument('--search', type=parse_count, metavar='TRIALS')
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser('amplify', parents=[common],
                       help='random translation amplification')
    p.add_argument('--M', type=int)
    p.add_argument('--J', type=int, default=1)
    p.add_argument('--lam', type=float)
    p.add_argument('--K0', type=float)
    p.add_argument('--mode', choices=('random', 'best_of'), default='random')
    p.add_argument('--best-of', type=int)
    p.add_argument('--flatten', type=int, metavar='N_TARGET',
                   help='collision statistics of Omega projected to '
                        'F^(N_TARGET - 1)')
    p.set_defaults(func=cmd_amplify)

    p = sub.add_parser('kplane', parents=[common],
                       help='k-plane Kakeya bounds and checks')
    p.add_argument('--bound', action='store_true')
    p.add_argument('--check', metavar='FILE')
    p.add_argument('--construct', action='store_true')
    p.set_defaults(func=cmd_kplane)
    return parser


def _settings(args):
    settings = {}
    if args.threads is not None:
        settings['n_jobs'] = args.threads
    if args.cap_enum is not None:
        settings['cap_enum'] = args.cap_enum
    if args.cap_matrix is not None:
        settings['cap_matrix'] = args.cap_matrix
    if getattr(args, 'K0', None) is not None:
        settings['k0'] = args.K0
    if getattr(args, 'best_of', None) is not None:
        settings['best_of'] = args.best_of
    return settings


def main(argv=None):
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:
            # --help and --version
            return EXIT_OK if e.code is None else e.code
        configure_logging(args.verbose)
        timer = PrintTime(logfile=args.timing_log) \
            if args.timing or args.timing_log else None
        with lab_config(**_settings(args)):
            status = args.func(args)
        if timer is not None:
            timer(args.command, total=True)
        return status
    except KakeyaLabError as e:
        print('error: %s: %s' % (type(e).__name__, e), file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
