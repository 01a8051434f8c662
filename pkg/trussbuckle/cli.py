#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Callable, Dict, List, Mapping  # Used for type hints
from typing import Optional, Sequence, Tuple  # Used for type hints
from dataclasses import dataclass, field, replace  # Used for the run configuration
import argparse  # Used to parse the command line
import logging  # Used for diagnostics
import os  # Used to read BUCKLE_LOG
import sys  # Used for stderr


# External imports
import numpy as np  # Used for the output vectors


# Internal imports
from trussbuckle.continuation import path_table, trace_path
from trussbuckle.errors import (
    ConfigurationError,
    ModelError,
    SingularGeometryError,
    SolverError,
)
from trussbuckle.generators import GENERATORS, default_sigma, generate
from trussbuckle.model import TrussModel
from trussbuckle.modelfile import load_model, save_model
from trussbuckle.optimizer import (
    bayes_optimize,
    compute_normalizers,
    make_problem,
    pareto_sweep,
    pareto_table,
    sample_design_space,
)
from trussbuckle.sampling import (
    RANDOM,
    SOBOL,
    ImperfectionDistribution,
    buckling_statistics,
    empirical_moments,
    setwise_moments,
)
from trussbuckle.stability import (
    ANALYTIC,
    FINITE_DIFFERENCE,
    SolverSettings,
    critical_load,
    imperfection_modes,
)
from trussbuckle.writer import Writer, write_json

################################### CLASSES ####################################

logger = logging.getLogger(__name__)

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}

# Commands working on a truss (all but generate).
TRUSS_COMMANDS = (
    "analyze",
    "buckle",
    "modes",
    "stats",
    "optimize",
    "pareto",
    "domain",
)
# Commands whose results depend on the seed.
SEEDED_COMMANDS = ("optimize", "pareto", "domain")


@dataclass(frozen=True)
class RunConfig:
    """
    The choices of one command line run.
    """

    command: str
    # Truss source, exactly one of model_path and kind.
    model_path: Optional[str] = None
    kind: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict)
    # Main artifact, a path or STDOUT.
    output: str = "STDOUT"
    # Path following.
    max_steps: Optional[int] = None
    lambda_max: Optional[float] = None
    dump_path: Optional[str] = None
    # Tolerance overrides.
    newton_tol: Optional[float] = None
    extended_tol: Optional[float] = None
    derivative: str = ANALYTIC
    # Imperfections.
    n_b: int = 1
    # Selected 1-based mode numbers, replacing the n_b leading modes.
    mode_numbers: Optional[Tuple[int, ...]] = None
    sigma_beta: Optional[float] = None
    samples: int = 128
    sampler: str = SOBOL
    set_size: Optional[int] = None
    samples_path: Optional[str] = None
    workers: int = 1
    # Optimisation.
    alpha: float = 0.5
    alphas: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    budget: int = 100
    n_init: Optional[int] = None
    seed: Optional[int] = None
    mean_star: Optional[float] = None
    std_star: Optional[float] = None
    normalizer_budget: Optional[int] = None
    history_path: Optional[str] = None
    count: int = 32

    def __post_init__(self):
        if self.command == "generate":
            if self.kind is None or self.model_path is not None:
                raise ConfigurationError("generate needs --kind and no --model.")
        elif self.command in TRUSS_COMMANDS:
            if (self.model_path is None) == (self.kind is None):
                raise ConfigurationError("Give exactly one of --model and --kind.")
        else:
            raise ConfigurationError(f"Unknown command {self.command!r}.")
        if self.command in SEEDED_COMMANDS and self.seed is None:
            raise ConfigurationError(f"{self.command} needs --seed.")
        if self.samples < 2 or self.samples % 2:
            raise ConfigurationError("--samples must be an even number, at least 2.")
        if self.n_b < 1:
            raise ConfigurationError("--modes must be positive.")

    @property
    def m(self) -> int:
        """
        Half the number of imperfection samples.
        """
        return self.samples // 2


################################## FUNCTIONS ###################################


def configure_logging(environ: Mapping[str, str] = os.environ):
    """
    Sets the level of the trussbuckle loggers from BUCKLE_LOG.
    """
    name = environ.get("BUCKLE_LOG", "warning").strip().lower()
    level = LOG_LEVELS.get(name)
    package = logging.getLogger("trussbuckle")
    if not package.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        package.addHandler(handler)
    package.setLevel(logging.WARNING if level is None else level)
    if level is None:
        package.warning("Unknown BUCKLE_LOG value %r, using warning.", name)


def parse_params(pairs: Optional[Sequence[str]]) -> Dict[str, float]:
    """
    Parses key=value generator parameters.
    """
    params: Dict[str, float] = dict()
    for pair in pairs or ():
        key, separator, value = pair.partition("=")
        if not separator or not key:
            raise ConfigurationError(f"Expected key=value, got {pair!r}.")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(
                f"Parameter {key!r} needs a number, got {value!r}."
            ) from None
    return params


def _alphas(text: str) -> Tuple[float, ...]:
    """
    argparse type of the comma separated weights.
    """
    try:
        return tuple(float(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid list of weights {text!r}.") from None


def _mode_numbers(text: str) -> Tuple[int, ...]:
    """
    argparse type of the comma separated mode numbers.
    """
    try:
        numbers = tuple(int(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid list of modes {text!r}.") from None
    if min(numbers) < 1:
        raise argparse.ArgumentTypeError("Mode numbers start at 1.")
    return numbers


def build_parser() -> argparse.ArgumentParser:
    """
    Returns the parser of the command line.
    """
    source = argparse.ArgumentParser(add_help=False)
    origin = source.add_mutually_exclusive_group()
    origin.add_argument("-m", "--model", dest="model_path", help="truss model file")
    origin.add_argument("--kind", choices=sorted(GENERATORS), help="example generator")
    source.add_argument(
        "--params",
        "--param",
        dest="param",
        action="append",
        metavar="KEY=VALUE",
        help="generator parameter",
    )
    source.add_argument("-o", "--output", default="STDOUT", help="main output path")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--newton-tol", type=float)
    solver.add_argument("--extended-tol", type=float)
    solver.add_argument("--max-steps", type=int)
    solver.add_argument("--lambda-max", type=float)
    solver.add_argument(
        "--derivative", choices=(ANALYTIC, FINITE_DIFFERENCE), default=ANALYTIC
    )

    imperfections = argparse.ArgumentParser(add_help=False)
    imperfections.add_argument("--sigma-beta", type=float)
    imperfections.add_argument("--modes", dest="n_b", type=int, default=1)
    imperfections.add_argument(
        "--mode-numbers", type=_mode_numbers, help="1-based modes, e.g. 2 or 1,3"
    )
    imperfections.add_argument("--samples", type=int, default=128, help="2m")
    imperfections.add_argument("--sampler", choices=(SOBOL, RANDOM), default=SOBOL)
    imperfections.add_argument("--workers", type=int, default=1)

    optimisation = argparse.ArgumentParser(add_help=False)
    optimisation.add_argument("--budget", type=int, default=100)
    optimisation.add_argument("--n-init", type=int)
    optimisation.add_argument("--seed", type=int, required=True)
    optimisation.add_argument("--mean-star", type=float)
    optimisation.add_argument("--std-star", type=float)
    optimisation.add_argument("--normalizer-budget", type=int)

    parser = argparse.ArgumentParser(
        prog="trussbuckle",
        description="Buckling load statistics and robust sizing of trusses.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    generate_parser = commands.add_parser("generate", help="write an example model")
    generate_parser.add_argument("--kind", choices=sorted(GENERATORS), required=True)
    generate_parser.add_argument(
        "--params", "--param", dest="param", action="append", metavar="KEY=VALUE"
    )
    generate_parser.add_argument("-o", "--output", default="STDOUT")

    analyze = commands.add_parser(
        "analyze", parents=[source, solver], help="trace the path"
    )
    analyze.add_argument("--dump-path", help="CSV of the path points")
    commands.add_parser("buckle", parents=[source, solver], help="critical load")
    commands.add_parser(
        "modes", parents=[source, solver, imperfections], help="linearised modes"
    )
    stats = commands.add_parser(
        "stats",
        parents=[source, solver, imperfections],
        help="critical load statistics",
    )
    stats.add_argument("--seed", type=int)
    stats.add_argument("--set-size", type=int)
    stats.add_argument("--samples-csv", dest="samples_path")
    optimize = commands.add_parser(
        "optimize",
        parents=[source, solver, imperfections, optimisation],
        help="robust sizing",
    )
    optimize.add_argument("--alpha", type=float, default=0.5)
    optimize.add_argument("--history-csv", dest="history_path")
    pareto = commands.add_parser(
        "pareto",
        parents=[source, solver, imperfections, optimisation],
        help="Pareto front over the weights",
    )
    pareto.add_argument("--alphas", type=_alphas, default=(0.0, 0.25, 0.5, 0.75, 1.0))
    domain = commands.add_parser(
        "domain",
        parents=[source, solver, imperfections],
        help="moments of designs spread over the design space",
    )
    domain.add_argument("--seed", type=int, required=True)
    domain.add_argument("--count", type=int, default=32)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Builds the RunConfig of parsed arguments.
    """
    values = dict(vars(args))
    values["params"] = parse_params(values.pop("param", None))
    known = set(RunConfig.__dataclass_fields__)
    return RunConfig(**{key: value for key, value in values.items() if key in known})


def solver_settings(config: RunConfig) -> SolverSettings:
    """
    Returns the default SolverSettings with the overrides of config.
    """
    settings = SolverSettings()
    continuation = settings.continuation
    if config.newton_tol is not None:
        continuation = replace(continuation, newton_tol=config.newton_tol)
    if config.max_steps is not None:
        continuation = replace(continuation, max_steps=config.max_steps)
    if config.lambda_max is not None:
        continuation = replace(continuation, lambda_max=config.lambda_max)
    extended = replace(settings.extended, derivative=config.derivative)
    if config.extended_tol is not None:
        tol = config.extended_tol
        extended = replace(extended, tol_r=tol, tol_k=tol, tol_s=tol)
    return SolverSettings(continuation=continuation, extended=extended)


def load_truss(config: RunConfig) -> TrussModel:
    """
    Returns the truss of the run, read or generated.
    """
    if config.model_path is not None:
        return load_model(config.model_path)
    return generate(config.kind, config.params)


def _sigma(config: RunConfig) -> float:
    """
    Returns the standard deviation of the mode amplitudes of the run.
    """
    if config.sigma_beta is not None:
        return config.sigma_beta
    if config.kind is None:
        raise ConfigurationError("--sigma-beta is required with --model.")
    return default_sigma(config.kind, config.params)


def _free_to_full(model: TrussModel, vector: np.ndarray) -> List[float]:
    """
    Pads a free dof vector with zeros on the supported dofs.
    """
    full = np.zeros(3 * model.n_p)
    full[model.free_dofs] = vector
    return full.tolist()


def _generate(config: RunConfig) -> int:
    save_model(generate(config.kind, config.params), config.output)
    return 0


def _analyze(config: RunConfig) -> int:
    model = load_truss(config)
    settings = solver_settings(config)
    points = trace_path(model, model.a_init, settings.continuation)
    if config.dump_path is not None:
        path_table(model, points).write(config.dump_path)
    crossings = [
        {
            "step": after.step_index,
            "lambda": after.lam,
            "negative_pivots": after.negative_pivots,
        }
        for before, after in zip(points, points[1:])
        if after.negative_pivots != before.negative_pivots
    ]
    summary = {
        "steps": points[-1].step_index,
        "lambda_final": points[-1].lam,
        "negative_pivots_final": points[-1].negative_pivots,
        "crossings": crossings,
    }
    write_json(summary, config.output)
    return 0


def _buckle(config: RunConfig) -> int:
    model = load_truss(config)
    point = critical_load(model, model.a_init, solver_settings(config))
    document = {
        "lambda_c": point.lam,
        "kind": point.kind,
        "iterations": point.iterations,
        "phi": _free_to_full(model, point.phi),
        "coordinates": model.expand(point.x).tolist(),
    }
    write_json(document, config.output)
    return 0


def _modes(config: RunConfig) -> int:
    model = load_truss(config)
    basis = imperfection_modes(
        model,
        model.a_init,
        config.n_b,
        config.mode_numbers,
        solver_settings(config).continuation,
    )
    write_json({"lambdas": basis.lambdas, "modes": basis.Phi.T}, config.output)
    return 0


def _stats(config: RunConfig) -> int:
    model = load_truss(config)
    settings = solver_settings(config)
    basis = imperfection_modes(
        model, model.a_init, config.n_b, config.mode_numbers, settings.continuation
    )
    sigma = np.array([_sigma(config)])
    distribution = ImperfectionDistribution(modes=basis, sigma=sigma)
    samples = buckling_statistics(
        model,
        model.a_init,
        distribution,
        config.m,
        settings,
        sampler=config.sampler,
        seed=config.seed,
        workers=config.workers,
    )
    mean, std = empirical_moments(samples)
    flagged = int(np.count_nonzero(samples.flagged))
    document = {
        "lambda_c0": samples.lambda_c0,
        "mean": mean,
        "std": std,
        "n_samples": samples.n_samples,
        "flagged": flagged,
    }
    if config.set_size is not None:
        document["setwise"] = [
            {"sets": sets, "mean": set_mean, "std": set_std}
            for sets, set_mean, set_std in setwise_moments(samples, config.set_size)
        ]
    if config.samples_path is not None:
        samples.table().write(config.samples_path)
    write_json(document, config.output)
    return 1 if flagged else 0


def _problem(config: RunConfig):
    """
    Returns the normalised RobustProblem of an optimisation run.
    """
    model = load_truss(config)
    problem = make_problem(
        model,
        config.n_b,
        _sigma(config),
        solver_settings(config),
        mode_numbers=config.mode_numbers,
        alpha=config.alpha,
        m=config.m,
        sampler=config.sampler,
        workers=config.workers,
    )
    if config.command == "domain":
        return problem
    mean_star, std_star = config.mean_star, config.std_star
    if mean_star is None or std_star is None:
        budget = config.normalizer_budget or config.budget
        found = compute_normalizers(problem, budget, config.n_init, config.seed)
        mean_star = found[0] if mean_star is None else mean_star
        std_star = found[1] if std_star is None else std_star
    return replace(problem, mean_star=mean_star, std_star=std_star)


def _optimize(config: RunConfig) -> int:
    problem = _problem(config)
    design, history = bayes_optimize(problem, config.budget, config.n_init, config.seed)
    if config.history_path is not None:
        history.table().write(config.history_path)
    best = history.incumbent
    document = {
        "alpha": problem.alpha,
        "a_opt": design,
        "mean": best.mean,
        "std": best.std,
        "g": best.g,
        "evaluations": history.counter,
        "mean_star": problem.mean_star,
        "std_star": problem.std_star,
        "history_csv_path": config.history_path,
    }
    write_json(document, config.output)
    return 0


def _pareto(config: RunConfig) -> int:
    problem = _problem(config)
    front = pareto_sweep(
        problem,
        config.alphas,
        config.budget,
        config.n_init,
        config.seed,
        config.workers,
    )
    pareto_table(front, problem.model.n_g).write(config.output)
    return 1 if any(point.failed for point in front) else 0


def _domain(config: RunConfig) -> int:
    problem = _problem(config)
    evaluations = sample_design_space(problem, config.count, config.seed)
    n_g = problem.model.n_g
    table = Writer(["mean", "std"] + [f"a{index}" for index in range(n_g)])
    for evaluation in evaluations:
        table.log([evaluation.mean, evaluation.std] + list(evaluation.design))
    table.write(config.output)
    return 0


# The command implementations.
COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "generate": _generate,
    "analyze": _analyze,
    "buckle": _buckle,
    "modes": _modes,
    "stats": _stats,
    "optimize": _optimize,
    "pareto": _pareto,
    "domain": _domain,
}


def run(config: RunConfig) -> int:
    """
    Executes the command of config and returns the exit code.
    """
    logger.info("running %s", config.command)
    return COMMANDS[config.command](config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the command line, returns the exit code: 0 on success, 1
    on a solver failure, 2 on invalid input.
    """
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return run(config_from_args(args))
    except (SolverError, SingularGeometryError) as error:
        print(f"trussbuckle: solver failure: {error}", file=sys.stderr)
        return 1
    except (ModelError, ConfigurationError, OSError) as error:
        print(f"trussbuckle: invalid input: {error}", file=sys.stderr)
        return 2


##################################### MAIN #####################################

if __name__ == "__main__":
    sys.exit(main())

##################################### EOF ######################################
