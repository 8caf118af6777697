"""Command-line interface wiring the library together.

Exit codes: 0 success, 1 usage error, 2 data error. All commands are
deterministic for a fixed seed and configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import TextIO

from . import model_io
from .evaluation import (
    SyntheticSpec,
    bigram_baseline,
    classify,
    evaluate_prediction,
    hit_rate,
    synth_generate,
    train_classifier,
)
from .encoding import total_dl
from .optimize import OptimizerConfig
from .rules import format_rule, parse_rule
from .selector import MiningConfig, cossu_mine
from .sequence import Alphabet


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 1 (not 2) on usage errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(self._usage_exit(message))

    def _usage_exit(self, message: str) -> int:
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return 1


def _add_mining_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--minsup", type=int, default=2)
    sp.add_argument("--max-pattern-len", type=int, default=20)
    sp.add_argument("--opt-passes", type=int, default=1)
    sp.add_argument("--opt-tol", type=float, default=1e-3)
    sp.add_argument(
        "--opt-bounds",
        default="1e-6,1e3",
        metavar="LO,HI",
        help="golden-section search bracket",
    )
    sp.add_argument("--precision", type=int, default=4)
    sp.add_argument(
        "--fast-screen",
        action="store_true",
        help="tune only the new rule's weight while screening candidates "
        "(full pass still runs on every acceptance)",
    )
    sp.add_argument(
        "--trace",
        action="store_true",
        help="log one key=value line per selection step to stderr",
    )


def _mining_config(args: argparse.Namespace) -> MiningConfig:
    try:
        lo_text, hi_text = args.opt_bounds.split(",")
        lo, hi = float(lo_text), float(hi_text)
    except ValueError:
        raise ValueError(f"bad --opt-bounds value: {args.opt_bounds!r}")
    return MiningConfig(
        minsup=args.minsup,
        max_pattern_len=args.max_pattern_len,
        optimizer=OptimizerConfig(
            lower=lo, upper=hi, tolerance=args.opt_tol, passes=args.opt_passes
        ),
        precision=args.precision,
        fast_screen=args.fast_screen,
    )


def _trace_writer(args: argparse.Namespace):
    if not getattr(args, "trace", False):
        return None

    def emit(fields: dict) -> None:
        line = " ".join(
            f"{k}={_trace_value(v)}" for k, v in fields.items()
        )
        print(line, file=sys.stderr)

    return emit


def _trace_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.4f}"
    if isinstance(v, str) and (" " in v or "=" in v):
        return json.dumps(v, ensure_ascii=False)
    return str(v)


def _out_stream(path: str | None) -> TextIO:
    return open(path, "w", encoding="utf-8", newline="") if path else sys.stdout


def cmd_mine(args: argparse.Namespace) -> int:
    s = model_io.read_sequence(args.sequence, args.char_mode)
    model = cossu_mine(s, _mining_config(args), _trace_writer(args))
    model_io.save_model(model, args.out)
    report = total_dl(model, s)
    found = [format_rule(r, model.alphabet) for r in model.non_singletons()]
    if args.json:
        print(
            json.dumps(
                {
                    "rules": found,
                    "model_bits": report.model_bits,
                    "data_bits": report.data_bits,
                    "total_bits": report.total,
                    "out": str(args.out),
                },
                ensure_ascii=False,
            )
        )
    else:
        print(f"rules found: {len(found)}")
        for text in found:
            print(f"  {text}")
        print(
            f"model_bits={report.model_bits:.3f} "
            f"data_bits={report.data_bits:.3f} total={report.total:.3f}"
        )
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    model = model_io.load_model(args.model)
    s = model_io.read_sequence(args.seq, args.char_mode, model.alphabet)
    report = total_dl(model, s)
    if args.json:
        print(
            json.dumps(
                {
                    "model_bits": report.model_bits,
                    "data_bits": report.data_bits,
                    "total_bits": report.total,
                }
            )
        )
    else:
        print(f"model_bits={report.model_bits:.6f}")
        print(f"data_bits={report.data_bits:.6f}")
        print(f"total={report.total:.6f}")
    return 0


def _parse_spec(args: argparse.Namespace) -> SyntheticSpec:
    alphabet = tuple(t for t in args.alphabet.split(",") if t)
    if not alphabet:
        raise ValueError("empty alphabet")
    if args.dist == "uniform":
        dist = None
    else:
        probs = [float(x) for x in args.dist.split(",")]
        if len(probs) != len(alphabet):
            raise ValueError("one probability per alphabet symbol required")
        dist = dict(zip(alphabet, probs))
    parsed = Alphabet(alphabet)
    rules = []
    if args.rules:
        for chunk in args.rules.split(";"):
            chunk = chunk.strip()
            if chunk:
                rule = parse_rule(chunk, parsed)
                rules.append(rule.tokens(parsed))
    return SyntheticSpec(
        length=args.n,
        alphabet=alphabet,
        distribution=dist,
        rules=tuple(rules),
        insertion_probability=args.ip,
        seed=args.seed,
    )


def cmd_synth(args: argparse.Namespace) -> int:
    spec = _parse_spec(args)
    s, targets = synth_generate(spec)
    if args.out:
        model_io.write_sequence(s, args.out)
    else:
        print(" ".join(s.tokens))
    if args.targets:
        model_io.save_targets(targets, s.alphabet, args.targets)
    return 0


def _hitrate_run(payload: tuple) -> tuple[int, list[str], bool]:
    spec_fields, mining_fields, seed = payload
    spec = SyntheticSpec(**{**spec_fields, "seed": seed})
    s, targets = synth_generate(spec)
    config = MiningConfig(**mining_fields)
    model = cossu_mine(s, config)
    mined = sorted(
        format_rule(r, model.alphabet) for r in model.non_singletons()
    )
    hit = hit_rate([model], targets, s.alphabet) == 100.0
    return seed, mined, hit


def cmd_eval_hitrate(args: argparse.Namespace) -> int:
    spec = _parse_spec(args)
    config = _mining_config(args)
    spec_fields = {
        "length": spec.length,
        "alphabet": spec.alphabet,
        "distribution": spec.distribution,
        "rules": spec.rules,
        "insertion_probability": spec.insertion_probability,
    }
    mining_fields = {
        "minsup": config.minsup,
        "max_pattern_len": config.max_pattern_len,
        "optimizer": config.optimizer,
        "precision": config.precision,
        "fast_screen": config.fast_screen,
    }
    seeds = list(range(args.seed, args.seed + args.runs))
    jobs = [(spec_fields, mining_fields, seed) for seed in seeds]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_hitrate_run, jobs))
    else:
        results = [_hitrate_run(job) for job in jobs]
    results.sort()
    stream = _out_stream(args.out)
    try:
        writer = csv.writer(stream)
        writer.writerow(["seed", "mined_rules", "hit"])
        for seed, mined, hit in results:
            writer.writerow([seed, ";".join(mined), int(hit)])
        rate = 100.0 * sum(hit for _, _, hit in results) / len(results)
        stream.write(f"# hit_rate={rate:.1f}\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def _parse_taus(text: str) -> tuple[float, ...]:
    if ":" in text:
        lo_text, hi_text, step_text = text.split(":")
        lo, hi, step = float(lo_text), float(hi_text), float(step_text)
        taus = []
        t = lo
        while t <= hi + 1e-12:
            taus.append(round(t, 10))
            t += step
        return tuple(taus)
    return tuple(float(x) for x in text.split(","))


def cmd_predict(args: argparse.Namespace) -> int:
    model = model_io.load_model(args.model)
    test = model_io.read_sequence(args.test, args.char_mode, model.alphabet)
    taus = _parse_taus(args.tau_grid)
    outcomes = {"cossu": evaluate_prediction(model, test, taus)}
    if args.train:
        train = model_io.read_sequence(
            args.train, args.char_mode, model.alphabet
        )
        outcomes["bigram"] = evaluate_prediction(
            bigram_baseline(train), test, taus
        )
    stream = _out_stream(args.out)
    try:
        writer = csv.writer(stream)
        writer.writerow(["method", "tau", "precision", "recall", "f1"])
        for method, outcome in outcomes.items():
            for tm in outcome.metrics:
                writer.writerow(
                    [
                        method,
                        f"{tm.tau:.2f}",
                        f"{tm.precision:.6f}",
                        f"{tm.recall:.6f}",
                        f"{tm.f1:.6f}",
                    ]
                )
        for method, outcome in outcomes.items():
            stream.write(f"# auc method={method} value={outcome.auc:.6f}\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def _class_training(args: argparse.Namespace) -> dict[str, list[Path]]:
    classes: dict[str, list[Path]] = {}
    for spec in args.train:
        for chunk in spec.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            label, sep, path = chunk.partition("=")
            if not sep or not label or not path:
                raise ValueError(f"bad --train entry: {chunk!r} (use label=path)")
            classes.setdefault(label, []).append(Path(path))
    if len(classes) < 2:
        raise ValueError("classification needs at least two classes")
    return classes


def _test_instances(target: Path) -> list[Path]:
    if target.is_dir():
        files = sorted(p for p in target.iterdir() if p.is_file())
        if not files:
            raise ValueError(f"no test instances in {target}")
        return files
    if target.is_file():
        return [target]
    raise ValueError(f"no such file or directory: {target}")


def cmd_classify(args: argparse.Namespace) -> int:
    classes = _class_training(args)
    training = {
        label: [
            model_io.read_sequence(p, args.char_mode) for p in paths
        ]
        for label, paths in classes.items()
    }
    clf = train_classifier(training, _mining_config(args))
    instances = _test_instances(Path(args.test))
    rows = []
    scored = 0
    correct = 0
    for path in instances:
        s = model_io.read_sequence(path, args.char_mode, clf.alphabet)
        label = classify(clf, s)
        truth = next(
            (c for c in clf.labels if path.name.startswith(f"{c}_")), ""
        )
        if truth:
            scored += 1
            correct += int(truth == label)
        rows.append((path.name, label, truth))
    stream = _out_stream(args.out)
    try:
        writer = csv.writer(stream)
        writer.writerow(["instance", "label", "truth"])
        writer.writerows(rows)
        if scored:
            stream.write(f"# accuracy={correct / scored:.4f} over={scored}\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="cossu", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mine", help="mine a weighted rule table")
    sp.add_argument("sequence")
    sp.add_argument("--out", required=True)
    sp.add_argument("--char-mode", action="store_true")
    sp.add_argument("--json", action="store_true")
    _add_mining_args(sp)
    sp.set_defaults(func=cmd_mine)

    sp = sub.add_parser("score", help="description length of a sequence")
    sp.add_argument("--model", required=True)
    sp.add_argument("--seq", required=True)
    sp.add_argument("--char-mode", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("synth", help="generate a planted-rule sequence")
    sp.add_argument("--n", type=int, default=5000)
    sp.add_argument("--alphabet", default="A,B,C,D,E")
    sp.add_argument("--dist", default="uniform")
    sp.add_argument("--rules", default="A->B")
    sp.add_argument("--ip", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.add_argument("--targets")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser(
        "eval-hitrate", help="planted-rule recovery over many seeds"
    )
    sp.add_argument("--runs", type=int, default=20)
    sp.add_argument("--n", type=int, default=5000)
    sp.add_argument("--alphabet", default="A,B,C,D,E")
    sp.add_argument("--dist", default="uniform")
    sp.add_argument("--rules", default="A->B")
    sp.add_argument("--ip", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0, help="base seed")
    sp.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1
    )
    sp.add_argument("--out")
    _add_mining_args(sp)
    sp.set_defaults(func=cmd_eval_hitrate)

    sp = sub.add_parser("predict", help="next-element prediction metrics")
    sp.add_argument("--model", required=True)
    sp.add_argument("--test", required=True)
    sp.add_argument("--train", help="adds the bigram baseline")
    sp.add_argument("--tau-grid", default="0:0.95:0.05")
    sp.add_argument("--char-mode", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("classify", help="compression-based classification")
    sp.add_argument(
        "--train",
        action="append",
        required=True,
        metavar="LABEL=PATH[,LABEL=PATH...]",
    )
    sp.add_argument("--test", required=True, help="instance file or directory")
    sp.add_argument("--char-mode", action="store_true")
    sp.add_argument("--out")
    _add_mining_args(sp)
    sp.set_defaults(func=cmd_classify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"cossu: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
