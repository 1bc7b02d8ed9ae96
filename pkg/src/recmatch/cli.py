"""Command-line entry points.

Subcommands: ``synth`` (draw a synthetic instance), ``solve`` (run one method
on an instance), ``audit`` (envy-audit a policy), ``experiment`` (full sweep
to CSV), ``ingest`` (fit preferences from an interaction log). Exit codes:
0 success, 1 usage error, 2 runtime failure. All outputs are byte-identical
across reruns with identical inputs unless runtime recording is requested.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import experiment as harness
from . import fw, model, serde
from .als import AlsConfig, InteractionLog, fit_preferences
from .datagen import SynthSpec, synth_instance
from .exam import ExaminationFunction, canonical_kind
from .model import Instance

EXAM_CHOICE = click.Choice(["inv", "log", "inverse", "logarithmic"])


@click.group()
def cli():
    """Reciprocal recommendation policies for two-sided markets."""


@cli.command()
@click.option("--n", type=int, required=True, help="Left-side agent count.")
@click.option("--m", type=int, required=True, help="Right-side agent count.")
@click.option("--lam", type=float, required=True, help="Popularity mixing weight in [0, 1].")
@click.option("--exam", type=EXAM_CHOICE, default="inv", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def synth(n, m, lam, exam, seed, out):
    """Draw a synthetic instance and write it as JSON."""
    spec = SynthSpec(n=n, m=m, lam=lam, exam_kind=canonical_kind(exam), seed=seed)
    serde.save_instance(out, synth_instance(spec))
    click.echo(f"wrote {out}")


def _solver_overrides(iterations, tolerance, step, inner_steps):
    overrides = {}
    if iterations is not None:
        overrides["max_iterations"] = iterations
    if tolerance is not None:
        overrides["tolerance"] = tolerance
    if step is not None:
        overrides["step_schedule"] = step
    if inner_steps is not None:
        overrides["inner_steps"] = inner_steps
    return overrides


@cli.command()
@click.option("--instance", "instance_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--method", type=click.Choice(harness.METHODS), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Policy JSON output.")
@click.option("--trace-out", type=click.Path(dir_okay=False), default=None, help="Solver trace CSV (sw/nsw only).")
@click.option("--iterations", type=int, default=None, help="Solver iteration budget.")
@click.option("--tolerance", type=float, default=None, help="Relative gap stop.")
@click.option("--step", type=click.Choice(fw.STEP_SCHEDULES), default=None)
@click.option("--inner-steps", type=int, default=None)
@click.option("--iterlp-k", type=int, default=None, help="Positions filled by iterlp.")
@click.option("--tau", type=float, default=1e-9, show_default=True, help="Envy tolerance.")
@click.option("--record-runtime", is_flag=True, help="Include wall time in metrics (breaks byte reproducibility).")
def solve(instance_path, method, out, trace_out, iterations, tolerance, step,
          inner_steps, iterlp_k, tau, record_runtime):
    """Run one method on an instance; write the policy and print metrics."""
    inst = serde.load_instance(instance_path)
    overrides = _solver_overrides(iterations, tolerance, step, inner_steps)
    trace = None
    if method in ("sw", "nsw"):
        cfg = fw.config_with_overrides(
            fw.SolverConfig(objective=method.upper()), overrides
        )
        policy, trace = fw.solve(inst, cfg)
    else:
        policy = harness.build_policy(inst, method, iterlp_k=iterlp_k)
    model.assert_valid_policy(inst, policy)
    report = model.envy_audit(inst, policy, tau)
    metrics = {
        "method": method,
        "expected_matches": model.social_welfare(inst, policy),
        "envy_left": report.left_envy_pairs,
        "envy_right": report.right_envy_pairs,
        "max_envy_left": report.max_left_envy,
        "max_envy_right": report.max_right_envy,
        "tau": tau,
    }
    serde.save_policy(out, policy)
    if trace is not None:
        metrics["iterations"] = trace.iterations
        metrics["converged"] = trace.converged
        if trace_out:
            trace.to_csv(trace_out)
    click.echo(json.dumps(metrics, indent=2, sort_keys=True))


@cli.command()
@click.option("--instance", "instance_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--policy", "policy_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--tau", type=float, default=1e-9, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report JSON here instead of stdout.")
def audit(instance_path, policy_path, tau, out):
    """Validate a policy and report its envy counts."""
    inst = serde.load_instance(instance_path)
    policy = serde.load_policy(policy_path)
    violations = model.validate_policy(inst, policy)
    if violations:
        raise click.ClickException("invalid policy: " + "; ".join(violations[:5]))
    report = model.envy_audit(inst, policy, tau).to_dict()
    report["expected_matches"] = model.social_welfare(inst, policy)
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Override the config's output path.")
def experiment(config_path, out):
    """Run the sweep described by a JSON config and write the CSV."""
    cfg = harness.ExperimentConfig.from_json(config_path)
    records = harness.run_experiment(cfg, output=out)
    click.echo(f"wrote {out or cfg.output} ({len(records)} rows)")


@cli.command()
@click.option("--log", "log_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--exam", type=EXAM_CHOICE, default="inv", show_default=True)
@click.option("--trunc", type=int, default=None, help="Examination truncation threshold K.")
@click.option("--dim", type=int, default=32, show_default=True)
@click.option("--reg", type=float, default=0.1, show_default=True)
@click.option("--alpha", type=float, default=40.0, show_default=True)
@click.option("--iterations", type=int, default=15, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def ingest(log_path, exam, trunc, dim, reg, alpha, iterations, seed, out):
    """Fit preference matrices from an interaction log; write an instance."""
    log = InteractionLog.from_csv(log_path)
    cfg = AlsConfig(dim=dim, reg=reg, alpha=alpha, iterations=iterations, seed=seed)
    p1, p2 = fit_preferences(log, cfg)
    exam_fn = ExaminationFunction(kind=canonical_kind(exam), K=trunc)
    serde.save_instance(out, Instance(p1, p2, exam_fn))
    click.echo(f"wrote {out} ({log.n}x{log.m})")


def main(argv=None) -> int:
    """Dispatch with the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="recmatch", standalone_mode=False)
    except click.exceptions.UsageError as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except click.exceptions.ClickException as exc:
        exc.show()
        return 2
    except (OSError, ValueError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
