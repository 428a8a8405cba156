"""
CLI, main routine
"""

import hashlib
import json
import logging
import sys

from contextlib import contextmanager
from pathlib import Path

from hypack import (
    __version__,
    body as builder,
    config,
    density,
    packing,
    parsers,
    saturation,
    settings,
)
from hypack.errors import StageError
from hypack.integrate import monte_carlo_area
from hypack.models import Body, GroupNorm, PackingWindow
from hypack.plot import save_svg
from hypack.regions import RectRegion
from hypack.serialise import Serialiser, dump_json, jsonable


logging.basicConfig(
    format="[%(asctime)s] %(levelname)s - %(message)s", datefmt="%H:%M:%S"
)

LOG = logging.getLogger("hypack")
LOG.setLevel(logging.INFO)


def digest(path):
    with open(path, "rb") as fp:
        return hashlib.sha256(fp.read()).hexdigest()


class RunManifest(Serialiser):
    """Record of one command run: what went in, what came out.

    No timestamps are stored, so equal runs give byte-identical manifests.
    """

    def __init__(
        self,
        command,
        parameters=None,
        inputs=None,
        outputs=None,
        seed=settings.DEFAULT_SEED,
        version=__version__,
        status="ok",
        stage=None,
    ):
        self.command = command
        self.parameters = parameters if parameters else {}
        self.inputs = inputs if inputs else {}
        self.outputs = outputs if outputs else {}
        self.seed = seed
        self.version = version
        self.status = status
        self.stage = stage

    def add_input(self, path):
        self.inputs[str(path)] = digest(path)

    def add_output(self, name, path):
        self.outputs[name] = digest(path)

    def fail(self, stage):
        self.status = "failed"
        self.stage = stage

    def to_dict(self):
        return {
            "schema": settings.SCHEMA,
            "command": self.command,
            "parameters": jsonable(self.parameters),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "seed": self.seed,
            "version": self.version,
            "status": self.status,
            "stage": self.stage,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["command"],
            d.get("parameters"),
            d.get("inputs"),
            d.get("outputs"),
            d.get("seed", settings.DEFAULT_SEED),
            d.get("version", __version__),
            d.get("status", "ok"),
            d.get("stage"),
        )

    def write(self, path):
        return dump_json(self, path)


def load_json(path, manifest=None):
    if manifest is not None:
        manifest.add_input(path)
    with open(path) as fp:
        return json.load(fp)


def write_record(record, path, manifest, name=None):
    dump_json(record, path)
    manifest.add_output(name or Path(path).name, path)


def _parameters(args):
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("command", "out")
    }


def build_body(args, manifest):
    if args.delta is None:
        m, delta, delta_prime = builder.choose_parameters(args.epsilon, args.m)
    else:
        m = args.m or builder.choose_parameters(args.epsilon)[0]
        delta = args.delta
        delta_prime = args.delta_prime if args.delta_prime is not None else delta / 5
    body = builder.build_body(m, delta, delta_prime, args.epsilon)
    out = args.out or "body.json"
    write_record(body, out, manifest)
    if args.svg:
        save_svg(body, args.svg)
        manifest.add_output(Path(args.svg).name, args.svg)
    return True, out


def _load_drawable(data):
    if "placements" in data:
        return PackingWindow.from_dict(data)
    return Body.from_dict(data)


def render(args, manifest):
    item = _load_drawable(load_json(args.input, manifest))
    out = args.out or str(Path(args.input).with_suffix(".svg"))
    save_svg(item, out)
    manifest.add_output(Path(out).name, out)
    return True, out


def tile(args, manifest):
    body = Body.from_dict(load_json(args.body, manifest))
    window = packing.generate_tiling_patch(body, args.i, args.j)
    ok = True
    if args.verify:
        coverage = packing.covers(window, body.pieces["R"])
        if not coverage.ok:
            LOG.error("Patch leaves part of R uncovered: %r", coverage.uncovered)
        ok = coverage.ok
    out = args.out or "patch.json"
    write_record(window, out, manifest)
    return ok, out


def verify(args, manifest):
    body = Body.from_dict(load_json(args.body, manifest))
    epsilon = args.epsilon if args.epsilon is not None else body.epsilon
    if epsilon is None:
        raise ValueError("No target density given and none stored with the body")
    report = {
        "schema": settings.SCHEMA,
        "epsilon_bound": builder.verify_epsilon_bound(body, epsilon),
        "fit": builder.verify_fit_condition(
            body,
            scales=args.scales,
            step=args.grid or settings.FIT_STEP,
            margin=args.margin,
            threads=args.threads,
        ),
    }
    ok = report["epsilon_bound"]["holds"] and report["fit"]["holds"]
    if args.packing:
        window = PackingWindow.from_dict(load_json(args.packing, manifest))
        report["packing"] = packing.is_packing(window)
        ok = ok and report["packing"].ok
    out = args.out or "verify.json"
    write_record(report, out, manifest)
    return ok, out


def saturate(args, manifest):
    window = PackingWindow.from_dict(load_json(args.packing, manifest))
    if args.region:
        region = RectRegion.from_dict(load_json(args.region, manifest))
    else:
        region = window.window
    out = args.out or "sat.json"
    if args.check == "map":
        result = saturation.saturate_map_euclid(
            window, args.cell, step=args.grid or settings.GRID_STEP, budget=args.budget
        )
        write_record(result, out, manifest)
        return True, out
    family = None
    if args.grid:
        family = saturation.default_family(
            window.body,
            region,
            step=args.grid,
            scales=args.scales,
            margin=args.check == "reducible",
        )
    if args.check == "unsaturated":
        verdict = saturation.check_unsaturated(
            window, region, args.kmax, family=family, budget=args.budget
        )
    else:
        verdict = saturation.check_reducible_covering(
            window, region, args.kmax, family=family, budget=args.budget
        )
    LOG.info("Verdict: %s", verdict.status)
    write_record(verdict, out, manifest)
    return verdict.known, out


def _monte_carlo(window, center, radii, seed):
    rows = []
    for r in radii:
        ball = density.make_ball(window.mode, center, r)
        estimate, stderr = monte_carlo_area(
            window.region(), ball, settings.MONTE_CARLO_SAMPLES, seed
        )
        rows.append({"r": r, "estimate": estimate / ball.area, "stderr": stderr / ball.area})
    return rows


def density_command(args, manifest):
    out = args.out or "density.json"
    if args.periodic:
        pp = density.PeriodicPacking.from_dict(load_json(args.periodic, manifest))
        record = {"schema": settings.SCHEMA, "cell": density.periodic_density(pp)}
        if args.r:
            record["sweep"] = density.birkhoff_sweep(
                pp, [args.center], args.r, tol=args.tol, threads=args.threads
            )
        write_record(record, out, manifest)
        return True, out
    window = PackingWindow.from_dict(load_json(args.packing, manifest))
    report = density.ball_density(window, args.center, args.r, tol=args.tol)
    if args.monte_carlo:
        report.details["monte_carlo"] = _monte_carlo(window, args.center, args.r, args.seed)
        report.provenance["seed"] = args.seed
    write_record(report, out, manifest)
    return True, out


def metric(args, manifest):
    first = PackingWindow.from_dict(load_json(args.first, manifest))
    second = PackingWindow.from_dict(load_json(args.second, manifest))
    norm = GroupNorm(args.w_scale, args.w_trans, args.norm)
    estimate = packing.metric_dK(first, second, norm, args.n_max)
    out = args.out or "metric.json"
    record = {"schema": settings.SCHEMA, "norm": norm, "n_max": args.n_max}
    record.update(estimate.to_dict())
    write_record(record, out, manifest)
    return True, out


def bound(args, manifest):
    body = Body.from_dict(load_json(args.body, manifest))
    report = density.bound_chain(body, args.mu_upper)
    out = args.out or "chain.json"
    write_record(report, out, manifest)
    return True, out


@contextmanager
def stage(name):
    """Turn any hypack error raised inside into a StageError naming the stage."""
    LOG.info("Stage: %s", name)
    try:
        yield
    except StageError:
        raise
    except ValueError as error:
        raise StageError(name, str(error)) from error


def cmd_reproduce(
    epsilon,
    outdir,
    m=None,
    seed=settings.DEFAULT_SEED,
    threads=settings.DEFAULT_THREADS,
):
    """Run the construction end to end and write every artifact into outdir.

    Returns:
        int: 0 when every stage passes, 1 otherwise.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest("reproduce", {"epsilon": epsilon, "m": m}, seed=seed)

    try:
        with stage("parameters"):
            m, delta, delta_prime = builder.choose_parameters(epsilon, m)

        with stage("body"):
            body = builder.build_body(m, delta, delta_prime, epsilon)
            write_record(body, outdir / "body.json", manifest)

        with stage("epsilon-bound"):
            result = builder.verify_epsilon_bound(body, epsilon)
            write_record(result, outdir / "bound.json", manifest)
            if not result["holds"]:
                raise StageError("epsilon-bound", f"bound {float(result['bound']):.6f} >= epsilon")

        with stage("fit"):
            fit = builder.verify_fit_condition(body, threads=threads)
            write_record(fit, outdir / "fit.json", manifest)
            if not fit["holds"]:
                raise StageError("fit", f"{len(fit['witnesses'])} placements reach into Q0")

        with stage("tiling"):
            j_range = (settings.PATCH_J[0], max(settings.PATCH_J[1], m - 1))
            patch = packing.generate_tiling_patch(body, settings.PATCH_I, j_range)
            write_record(patch, outdir / "patch.json", manifest)
            if not packing.is_packing(patch).ok:
                raise StageError("tiling", "copies overlap")
            if not packing.covers(patch, body.pieces["R"]).ok:
                raise StageError("tiling", "patch does not cover the central rectangle R")

        with stage("chain"):
            chain = density.bound_chain(body)
            write_record(chain, outdir / "chain.json", manifest)
            if not chain.value < epsilon:
                raise StageError("chain", "bound chain does not reach below epsilon")

        with stage("svg"):
            for item, name in ((body, "body.svg"), (patch, "patch.svg")):
                save_svg(item, outdir / name)
                manifest.add_output(name, outdir / name)

    except StageError as error:
        LOG.error("Stage %s failed: %s", error.stage, error)
        manifest.fail(error.stage)
        manifest.write(outdir / "manifest.json")
        return 1

    manifest.write(outdir / "manifest.json")
    LOG.info("All stages passed for epsilon=%s", epsilon)
    return 0


COMMANDS = {
    "build-body": build_body,
    "render": render,
    "tile": tile,
    "verify": verify,
    "saturate": saturate,
    "density": density_command,
    "metric": metric,
    "bound": bound,
}


def main(argv=None):
    try:
        args = parsers.parse_args(sys.argv[1:] if argv is None else argv)
    except ValueError as error:
        LOG.error("%s", error)
        return 2

    if args.command == "config":
        config.write_config_file(seed=args.seed, tol=args.tol, threads=args.threads)
        return 0

    for key, value in config.get_defaults().items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)

    LOG.info("Starting hypack %s", args.command)
    if args.command == "reproduce":
        return cmd_reproduce(
            args.epsilon, args.out, m=args.m, seed=args.seed, threads=args.threads
        )

    manifest = RunManifest(args.command, _parameters(args), seed=args.seed)
    try:
        ok, out = COMMANDS[args.command](args, manifest)
    except ValueError:
        LOG.exception("hypack %s failed! Exiting...", args.command)
        return 1
    if not ok:
        manifest.fail(args.command)
    manifest.write(Path(out).parent / "manifest.json")
    LOG.info("Done!")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
