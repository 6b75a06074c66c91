"""
Interface en ligne de commande : sous-commandes d'analyse et démonstration de bout en bout

Codes de sortie : 0 succès, 1 erreur de lecture, 2 canal non valide,
3 erreur du domaine, 4 échec d'une vérification de la démonstration.
"""

import argparse
import logging

import numpy as np
import pandas as pd

from src.capacity import CapacityBoundParams, continuity_capacity_bound, sequential_distance_bound
from src.channels import QuantumChannel, identity_channel, validate_channel
from src.config import Config
from src.data_loader import channel_to_dict, load_channel, load_code
from src.evaluation import run_demo_checks
from src.exceptions import OutOfRangeError, SeqCapError
from src.export_results import frame_to_csv, generate_summary_report, to_json, write_output
from src.network import NodeSpec, SweepConfig, build_node, entanglement_horizon, resolve_epsilon, sweep
from src.noise import (
    FockTruncation,
    amplitude_damping,
    bit_flip,
    bosonic_ad_kraus,
    depolarizing,
    pure_loss_kraus,
)
from src.qec import (
    chernoff_tail_bound,
    cly_code,
    cly_error_curve,
    cly_error_set,
    cly_noise,
    kl_check,
    tail_error_bound,
    trivial_code,
)
from src.transfer import spectral_report

logger = logging.getLogger(__name__)

MODELS = ('identity', 'ad', 'bosonic-ad', 'pure-loss', 'depolarizing', 'bit-flip')
EXIT_DEMO_FAILURE = 4


def build_model(name: str, gamma: float = None, eta: float = None, p: float = None,
                cutoff: int = 4) -> QuantumChannel:
    """Canal nommé avec ses paramètres"""
    def need(value, flag):
        if value is None:
            raise OutOfRangeError(f"Le modèle {name} exige {flag}")
        return value

    if name == 'identity':
        return identity_channel(2)
    if name == 'ad':
        return amplitude_damping(need(gamma, '--gamma'))
    if name == 'bosonic-ad':
        return bosonic_ad_kraus(need(gamma, '--gamma'), FockTruncation(cutoff))
    if name == 'pure-loss':
        return pure_loss_kraus(need(eta, '--eta'), FockTruncation(cutoff))
    if name == 'depolarizing':
        return depolarizing(need(p, '--p'))
    if name == 'bit-flip':
        return bit_flip(need(p, '--p'))
    raise OutOfRangeError(f"Modèle inconnu: {name}")


def cmd_validate(args, config: Config) -> int:
    channel = load_channel(args.channel_file, validate=False)
    report = validate_channel(channel, config.tolerances)
    write_output(to_json({'passed': report.passed, 'defect': report.defect,
                          'dim_in': channel.dim_in, 'dim_out': channel.dim_out,
                          'n_kraus': channel.n_kraus}, config), args.output)
    return 0 if report.passed else 2


def cmd_model(args, config: Config) -> int:
    channel = build_model(args.name, args.gamma, args.eta, args.p, args.cutoff)
    write_output(to_json(channel_to_dict(channel), config), args.output)
    return 0


def cmd_spectral(args, config: Config) -> int:
    channel = load_channel(args.channel_file)
    report = spectral_report(channel, args.nmax, config.tolerances)
    rows = [
        {'n': s.n, 'R_n': report.radius(s.n), 'delta_norm': s.norm, 'delta_root': s.root}
        for s in report.gelfand_trace
    ]
    write_output(to_json({
        't': report.canonical.t,
        'lambda': report.lam,
        'mu': report.mu,
        'frame': report.frame,
        'limit_transfer': report.limit_transfer,
        'limit_transfer_original': report.limit_transfer_original,
        'rows': rows,
    }, config), args.output)
    return 0


def cmd_capacity(args, config: Config) -> int:
    if args.find_horizon:
        write_output(str(entanglement_horizon(args.epsilon, args.db)), args.output)
        return 0
    records = []
    for n in range(args.nmax + 1):
        value = continuity_capacity_bound(CapacityBoundParams(epsilon=args.epsilon, n=n, d_B=args.db))
        records.append({'n': n, 'epsilon': args.epsilon, 'capacity_lower': max(0.0, value),
                        'distance_upper': sequential_distance_bound(args.epsilon, n),
                        'feasible': value > 0.0})
    n_clamped = sum(1 for r in records if not r['feasible'])
    if n_clamped:
        logger.warning(f"{n_clamped} borne(s) négative(s) affichée(s) à 0")
    _emit_table(pd.DataFrame(records), args, config)
    return 0


def cmd_errbound(args, config: Config) -> int:
    if args.cly:
        if args.gamma is None:
            raise OutOfRangeError("--cly exige --gamma")
        rows = cly_error_curve([args.gamma], args.cutoff)
        df = pd.DataFrame([{'gamma': r.gamma, 'k': 3, 'exact_norm': r.exact_norm,
                            'p_formula_max': r.p_formula_max, 'bound_49g2': r.bound_49g2}
                           for r in rows])
    else:
        if args.channel_file:
            channel = load_channel(args.channel_file)
        else:
            channel = build_model(args.model, args.gamma, args.eta, args.p, args.cutoff)
        df = pd.DataFrame([{'n_kraus': channel.n_kraus, 'k': args.k,
                            'exact_norm': tail_error_bound(channel.kraus, args.k)}])
    _emit_table(df, args, config)
    return 0


def cmd_pureloss(args, config: Config) -> int:
    report = chernoff_tail_bound(args.eta, args.k, args.cutoff, config.chernoff_log_base)
    if args.format == 'json':
        write_output(to_json({
            'eta': args.eta, 'k': report.k, 'cutoff': args.cutoff,
            'exact_norm': report.exact_norm, 'chernoff': report.chernoff,
            'chernoff_valid': report.chernoff_valid,
            'rows': [vars(r) for r in report.rows],
        }, config), args.output)
        return 0
    df = pd.DataFrame([{'m': r.m, 'exact': r.exact, 'chernoff': r.chernoff,
                        'chernoff_valid': r.valid, 'chernoff_literal': r.literal,
                        'exact_norm': report.exact_norm} for r in report.rows])
    _emit_table(df, args, config)
    return 0


def _node_spec(args, config: Config) -> NodeSpec:
    if args.code == 'cly':
        gamma = args.gamma if args.gamma is not None else 0.01
        return NodeSpec(noise=cly_noise(gamma, args.cutoff), code=cly_code(args.cutoff),
                        corrected=cly_error_set(gamma, args.cutoff), epsilon=args.epsilon)
    code = trivial_code(2) if args.code == 'trivial' else load_code(args.code)
    if args.noise_file:
        noise = load_channel(args.noise_file)
    else:
        noise = build_model(args.noise, args.gamma, args.eta, args.p, args.cutoff)
    return NodeSpec(noise=noise, code=code, epsilon=args.epsilon)


def cmd_node(args, config: Config) -> int:
    spec = _node_spec(args, config)
    node = build_node(spec, config.tolerances)
    epsilon, source = resolve_epsilon(spec, node, config.tolerances)
    kl = kl_check(spec.code, spec.corrected_errors(), config.tolerances)
    write_output(to_json({
        'node': channel_to_dict(node),
        'epsilon': epsilon,
        'epsilon_source': source,
        'knill_laflamme': {'satisfied': kl.satisfied, 'max_violation': kl.max_violation,
                           'c_matrix': kl.c_matrix},
        'completeness_defect': validate_channel(node).defect,
    }, config), args.output)
    return 0


def cmd_sweep(args, config: Config) -> int:
    if args.param_range:
        start, stop, step = args.param_range
        params = list(np.round(np.arange(start, stop + step / 2.0, step), 12))
    else:
        params = args.params or []
    sweep_config = SweepConfig(model=args.model, params=params,
                               n_values=list(range(args.nmin, args.nmax + 1)),
                               cutoff=args.cutoff, k=args.k, config=config)
    _emit_table(sweep(sweep_config), args, config)
    return 0


def cmd_paper_demo(args, config: Config) -> int:
    checks = run_demo_checks(config, args.gamma)
    text = generate_summary_report(checks, output_file=args.report)
    write_output(text, args.output)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.error(f"Vérifications en échec: {', '.join(failed)}")
        return EXIT_DEMO_FAILURE
    return 0


def _emit_table(df: pd.DataFrame, args, config: Config) -> None:
    if getattr(args, 'format', 'csv') == 'json':
        records = df.astype(object).where(df.notna(), None).to_dict(orient='records')
        write_output(to_json({'rows': records}, config), args.output)
    else:
        write_output(frame_to_csv(df, config), args.output)


def build_parser() -> argparse.ArgumentParser:
    """Construit l'analyseur d'arguments"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', '-o', type=str, default=None,
                        help='Fichier de sortie (défaut: sortie standard)')
    common.add_argument('--format', choices=('csv', 'json'), default='csv',
                        help='Format des tableaux (défaut: csv)')
    common.add_argument('--seed', type=int, default=Config.seed,
                        help=f'Graine du générateur (défaut: {Config.seed})')
    common.add_argument('--threads', type=int, default=None,
                        help='Nombre de threads (0 = automatique, défaut: SEQCAP_THREADS)')
    common.add_argument('--verbose', action='store_true', help='Journalisation DEBUG')
    common.add_argument('--quiet', action='store_true', help='Journalisation WARNING')

    model_args = argparse.ArgumentParser(add_help=False)
    model_args.add_argument('--gamma', type=float, default=None, help="Probabilité d'amortissement γ")
    model_args.add_argument('--eta', type=float, default=None, help='Transmission η')
    model_args.add_argument('--p', type=float, default=None, help='Probabilité (dépolarisant, bit-flip)')
    model_args.add_argument('--cutoff', type=int, default=4, help='Troncature de Fock (défaut: 4)')

    parser = argparse.ArgumentParser(
        prog='seqcap',
        description='Bornes de capacité et de distance pour les compositions séquentielles de canaux quantiques',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemples d'utilisation:
  python main.py model ad --gamma 0.3 -o data/ad.json
  python main.py validate data/ad.json
  python main.py capacity --epsilon 0.0005 --nmax 50
  python main.py capacity --epsilon 0.0005 --find-horizon
  python main.py pureloss --eta 0.9 --cutoff 4 --k 1
  python main.py paper-demo
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', parents=[common], help='Vérifie la préservation de la trace')
    p.add_argument('channel_file')
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser('model', parents=[common, model_args], help='Écrit un canal nommé en JSON')
    p.add_argument('name', choices=MODELS)
    p.set_defaults(handler=cmd_model)

    p = sub.add_parser('spectral', parents=[common], help="Analyse spectrale d'un canal qubit")
    p.add_argument('channel_file')
    p.add_argument('--nmax', type=int, default=64)
    p.set_defaults(handler=cmd_spectral)

    p = sub.add_parser('capacity', parents=[common], help='Table de la borne de capacité')
    p.add_argument('--epsilon', type=float, required=True)
    p.add_argument('--nmax', type=int, default=Config.n_max)
    p.add_argument('--db', type=int, default=2)
    p.add_argument('--find-horizon', action='store_true',
                   help='Affiche le plus grand n de borne positive')
    p.set_defaults(handler=cmd_capacity)

    p = sub.add_parser('errbound', parents=[common, model_args], help='Norme de la queue de Kraus')
    p.add_argument('channel_file', nargs='?', default=None)
    p.add_argument('--model', choices=MODELS, default='ad')
    p.add_argument('--k', type=int, default=1, help='Nombre de Kraus corrigés (en tête)')
    p.add_argument('--cly', action='store_true', help='Queue du code bosonique à deux modes')
    p.set_defaults(handler=cmd_errbound)

    p = sub.add_parser('pureloss', parents=[common], help='Queue binomiale et bornes de Chernoff')
    p.add_argument('--eta', type=float, required=True)
    p.add_argument('--cutoff', type=int, default=4)
    p.add_argument('--k', type=int, default=1)
    p.set_defaults(handler=cmd_pureloss)

    p = sub.add_parser('node', parents=[common, model_args], help='Construit le nœud D∘N∘E')
    p.add_argument('--code', default='cly', help="'cly', 'trivial' ou un fichier de code JSON")
    p.add_argument('--noise', choices=MODELS, default='ad')
    p.add_argument('--noise-file', default=None)
    p.add_argument('--epsilon', type=float, default=None)
    p.set_defaults(handler=cmd_node)

    p = sub.add_parser('sweep', parents=[common], help='Balayage (paramètre × n)')
    p.add_argument('--model', choices=('ad', 'bosonic-ad', 'pure-loss'), required=True)
    p.add_argument('--params', type=float, nargs='+', default=None)
    p.add_argument('--param-range', type=float, nargs=3, metavar=('START', 'STOP', 'STEP'))
    p.add_argument('--nmin', type=int, default=0)
    p.add_argument('--nmax', type=int, default=50)
    p.add_argument('--cutoff', type=int, default=4)
    p.add_argument('--k', type=int, default=1)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser('paper-demo', parents=[common], help='Vérifications de bout en bout')
    p.add_argument('--gamma', type=float, nargs='+', default=None)
    p.add_argument('--report', default=None, help='Fichier du rapport texte')
    p.set_defaults(handler=cmd_paper_demo)

    return parser


def main(argv=None) -> int:
    """
    Point d'entrée : analyse les arguments et renvoie le code de sortie.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    config = Config(seed=args.seed, threads=args.threads)
    try:
        return args.handler(args, config)
    except SeqCapError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Erreur inattendue: {type(e).__name__}: {e}")
        return 3
