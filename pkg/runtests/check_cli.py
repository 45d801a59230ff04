from pathlib import Path
import json
import tempfile

from py_lane_emden.bvp import SolverMode
from py_lane_emden.cli import main
from py_lane_emden.config import *
from py_lane_emden.errors import DomainError
from runtests.util import raises

assert parse_schedule("0.5:0.3:geo0.8")[:2] == (0.5, 0.4)
assert parse_schedule("0.4,0.2,0.1") == (0.4, 0.2, 0.1)
raises(DomainError, parse_schedule, "0.1,0.2")
raises(DomainError, parse_schedule, "0.02:0.5:geo0.8")
raises(DomainError, parse_schedule, "a:b:geoc")
raises(DomainError, parse_schedule, "0.5;0.2")
assert parse_point("0,0.5,1") == (0.0, 0.5, 1.0)
assert parse_point([1, 2, 3]) == (1.0, 2.0, 3.0)

config = load_config("sweep", overrides=dict(ground=dict(p=5, N=None), solver=dict(mode="perturbation")))
assert config.ground.p == 5.0 and config.ground.N == 3
assert config.solver.mode is SolverMode.perturbation
assert config.to_dict()["solver"]["mode"] == "linear-perturbation"
assert config_digest(config) == config_digest(load_config("sweep", overrides=dict(
    ground=dict(p=5.0), solver=dict(mode="linear-perturbation"))))
assert config_digest(config) != config_digest(load_config("sweep", overrides=dict(ground=dict(p=5.0))))
raises(DomainError, load_config, "sweep", overrides=dict(ground=dict(p=5, colour="red")))
raises(DomainError, load_config, "sweep")
raises(DomainError, load_config, "ground", overrides=dict(ground=dict(p=5, N=2)))
raises(DomainError, load_config, "solve", overrides=dict(ground=dict(p=5), solver=dict(domain="torus")))
raises(DomainError, load_config, "solve", overrides=dict(ground=dict(p=5), solver=dict(grid=64)))
raises(DomainError, load_config, "sweep", overrides=dict(ground=dict(p=5), sweep=dict(extrapolation="log")))
assert SolverConfig(domain="box", side=2.0).build(3).upper == (2.0, 2.0, 2.0)
raises(DomainError, SolverConfig(domain="box").build, 4)

manifest = RunManifest("ground", {}, "0" * 64)
manifest.record_check("flux", True, 1e-6)
manifest.record_check("pohozaev", False, 1e-6)
assert not manifest.all_passed
manifest.finish(1, 0.5)
assert manifest.as_dict()["status"] == "failed" and manifest.finished is not None

with tempfile.TemporaryDirectory() as tmp:
    config_file = Path(tmp) / "run.json"
    config_file.write_text(json.dumps(dict(ground=dict(p=2.5, N=3), sweep=dict(schedule="0.5:0.1:geo0.5"))))
    loaded = load_config("sweep", config_file, dict(sweep=dict(schedule=None, extrapolation="inv_log")))
    assert loaded.ground.p == 2.5 and loaded.sweep.eps_values == (0.5, 0.25, 0.125)
    assert loaded.sweep.extrapolation == "inv_log"

    out = str(Path(tmp) / "runs")
    assert main(["--out", out, "sweep", "--p", "5", "--N", "3", "--eps", "0.1,0.2"]) == 64
    assert main(["--out", out, "verify", "bogus"]) == 64
    assert main(["--out", out, "frobnicate"]) == 64
    assert main(["--out", out]) == 64
    assert main(["--out", out, "--threads", "0", "verify", "identities"]) == 64
    assert main(["--out", out, "--config", str(Path(tmp) / "missing.json"), "verify", "all"]) == 64

    assert main(["--out", out, "-q", "ground", "--p", "0.5", "--N", "3"]) == 64
    manifests = list(Path(out).glob("*/manifest.json"))
    assert len(manifests) == 1
    failed = json.loads(manifests[0].read_text())
    assert failed["exit_code"] == 64 and failed["status"] == "failed" and failed["error"]

    green_out = str(Path(tmp) / "green")
    assert main(["--out", green_out, "-q", "green", "--domain", "ball", "--R", "1", "--N", "3",
                 "--x0", "0,0,0", "--identities"]) == 0
    run_dir = next(Path(green_out).iterdir())
    written = json.loads((run_dir / "manifest.json").read_text())
    assert written["status"] == "ok" and written["checks"]["identity_i"]["passed"]
    assert (run_dir / "bundle.json").exists() and (run_dir / "field.csv").exists()
    assert run_dir.name.endswith(written["digest"][:12])
