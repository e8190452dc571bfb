"""Command-line front end: augment, demo-destructive, validate, gen-synth.

Reproducibility rules, honored by every command:

* all randomness flows from ``--seed`` through per-purpose streams; the
  stream for sample i is keyed by (seed, i), so batch workers can run in
  any order and thread count never changes the output;
* configuration is resolved fully (flags override the ``--config`` INI
  file, sections named after the commands) before any output is touched;
* the augment sidecar (``<output>.json``) records seed, method, and the
  per-sample draw, enough to re-audit every mixed sample later.
"""

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .audit import audit_mix, destruction_sweep, write_sweep_csv
from .datasets import LabeledDataset, read_binary, read_csv, write_binary, write_csv
from .errors import InvalidSpecError, ParseError
from .mixing import (
    MixCoefficients,
    amplitude_mix,
    binary_mix,
    cut_mix,
    geometric_mix,
    linear_mix,
    spec_mix,
    supervised_mix,
    tailored_mix,
)
from .policy import (
    BASELINE_PARAMS,
    PROFILES,
    CoefficientPolicy,
    TruncNormalSpec,
    UniformSpec,
    choose_coefficients,
)
from .similarity import load_embeddings, spectral_provider
from .spectral import BandSpec, TimeSeries
from .synth import AdversarialPairSpec, SynthSpec, adversarial_pair, generate_labeled

METHODS = ("tailored", "linear", "binary", "geometric", "cutmix", "amplitude", "specmix", "supervised")

_PAIRING_STREAM = 0
_SAMPLE_STREAM = 1
_PHASE_STREAM = 2


def _rng(seed: int, *key: int) -> np.random.Generator:
    if seed < 0:
        raise InvalidSpecError(f"seed must be a nonnegative integer, got {seed}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


class Settings:
    """Option resolution: CLI flag, then config-file key, then default."""

    def __init__(self, args: argparse.Namespace, section: str):
        self._args = vars(args)
        self._section: dict[str, str] = {}
        config_path = self._args.get("config")
        if config_path:
            parser = configparser.ConfigParser()
            read = parser.read(config_path)
            if not read:
                raise InvalidSpecError(f"config file not found: {config_path}")
            if parser.has_section(section):
                self._section = dict(parser.items(section))

    def get(self, name: str, default=None, cast=str):
        value = self._args.get(name.replace("-", "_"))
        if value is not None:
            return value
        raw = self._section.get(name.replace("-", "_"))
        if raw is None:
            return default
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(tok) for tok in text.split(":"))
    except ValueError:
        raise InvalidSpecError(f"expected 'lo:hi', got {text!r}") from None
    return lo, hi


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InvalidSpecError(f"expected comma-separated floats, got {text!r}") from None


def _parse_trunc(text: str) -> TruncNormalSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise InvalidSpecError(f"expected 'mu:sigma:lo:hi', got {text!r}")
    try:
        mu, sigma, lo, hi = (float(tok) for tok in parts)
    except ValueError:
        raise InvalidSpecError(f"expected 'mu:sigma:lo:hi', got {text!r}") from None
    return TruncNormalSpec(mu, sigma, lo, hi)


def _resolve_policy(settings: Settings, profile: str) -> CoefficientPolicy:
    """Profile preset, with any field overridden from the config file.

    Keys: similarity_threshold, close_amp / close_phase as ``lo:hi``,
    far_amp / far_phase as ``mu:sigma:lo:hi``.
    """
    base = PROFILES[profile]
    eps = settings.get("similarity-threshold", None, float)
    close_amp = settings.get("close-amp")
    close_phase = settings.get("close-phase")
    far_amp = settings.get("far-amp")
    far_phase = settings.get("far-phase")
    if all(v is None for v in (eps, close_amp, close_phase, far_amp, far_phase)):
        return base
    return CoefficientPolicy(
        similarity_threshold=eps if eps is not None else base.similarity_threshold,
        close_amp=UniformSpec(*_parse_range(close_amp)) if close_amp else base.close_amp,
        close_phase=UniformSpec(*_parse_range(close_phase)) if close_phase else base.close_phase,
        far_amp=_parse_trunc(far_amp) if far_amp else base.far_amp,
        far_phase=_parse_trunc(far_phase) if far_phase else base.far_phase,
    )


def _read_dataset(path: str, sample_rate_hz: float) -> LabeledDataset:
    if str(path).endswith(".csv"):
        return read_csv(path, sample_rate_hz)
    return read_binary(path)


def _write_dataset(dataset: LabeledDataset, path: str) -> None:
    if str(path).endswith(".csv"):
        write_csv(dataset, path)
    else:
        write_binary(dataset, path)


def _read_pairing(path, dataset: LabeledDataset) -> np.ndarray:
    """Pairing CSV: header anchor_id,partner_id; must cover every sample."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or [t.strip() for t in lines[0].split(",")] != ["anchor_id", "partner_id"]:
        raise ParseError("expected header 'anchor_id,partner_id'", 1)
    partners = np.full(len(dataset), -1, dtype=np.int64)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            anchor_id, partner_id = (int(tok) for tok in line.split(","))
        except ValueError:
            raise ParseError(f"bad pairing row {line!r}", lineno) from None
        partners[dataset.index_of(anchor_id)] = dataset.index_of(partner_id)
    if np.any(partners < 0):
        missing = dataset.ids[np.flatnonzero(partners < 0)][:5]
        raise InvalidSpecError(f"pairing file misses sample ids {missing.tolist()}")
    return partners


def cmd_augment(args: argparse.Namespace) -> int:
    settings = Settings(args, "augment")
    seed = settings.get("seed", 0, int)
    threads = settings.get("threads", 1, int)
    profile = settings.get("profile", "activity")
    method = settings.get("method", None)
    if method not in METHODS:
        raise InvalidSpecError(f"method must be one of {METHODS}, got {method!r}")
    if profile not in PROFILES:
        raise InvalidSpecError(f"profile must be one of {tuple(PROFILES)}, got {profile!r}")
    input_path = settings.get("input")
    output_path = settings.get("output")
    if not input_path or not output_path:
        raise InvalidSpecError("augment requires --input and --output")
    sample_rate = settings.get("sample-rate", 1.0, float)
    fixed_lam_a = settings.get("lambda-a", None, float)
    fixed_lam_p = settings.get("lambda-p", None, float)
    normalize = not settings.get("no-normalize", False, bool)
    alpha = settings.get("alpha", 0.2, float)
    embed_bands = settings.get("embed-bands", 8, int)
    policy = _resolve_policy(settings, profile)
    baseline = BASELINE_PARAMS[profile]

    dataset = _read_dataset(input_path, sample_rate)
    if len(dataset) == 0:
        raise InvalidSpecError("cannot augment an empty dataset")
    if method == "supervised" and dataset.labels is None:
        raise InvalidSpecError("supervised mixing requires a labeled dataset")

    pairing_path = settings.get("pairing")
    if pairing_path:
        partners = _read_pairing(pairing_path, dataset)
    else:
        partners = _rng(seed, _PAIRING_STREAM).permutation(len(dataset))

    provider = None
    if method == "tailored" and (fixed_lam_a is None or fixed_lam_p is None):
        embeddings_path = settings.get("embeddings")
        if embeddings_path:
            provider = load_embeddings(embeddings_path)
        else:
            provider = spectral_provider(dataset.samples, dataset.ids, embed_bands)

    def mix_one(i: int) -> tuple[TimeSeries, dict]:
        rng = _rng(seed, _SAMPLE_STREAM, i)
        anchor = dataset.samples[i]
        j = int(partners[i])
        other = dataset.samples[j]
        meta = {
            "id": int(dataset.ids[i]),
            "partner": int(dataset.ids[j]),
            "method": method,
            "lambda_a": None,
            "lambda_p": None,
            "branch": None,
        }
        if method == "tailored":
            if fixed_lam_a is not None and fixed_lam_p is not None:
                coef = MixCoefficients(fixed_lam_a, fixed_lam_p, "fixed")
            else:
                # gate on similarity, then apply any single fixed override
                sim = provider.similarity(int(dataset.ids[i]), int(dataset.ids[j]))
                coef = choose_coefficients(sim, policy, rng)
                if fixed_lam_a is not None:
                    coef = MixCoefficients(fixed_lam_a, coef.lambda_p, coef.source)
                if fixed_lam_p is not None:
                    coef = MixCoefficients(coef.lambda_a, fixed_lam_p, coef.source)
            meta.update(lambda_a=coef.lambda_a, lambda_p=coef.lambda_p, branch=coef.source)
            return tailored_mix(anchor, other, coef, normalize), meta
        if method == "supervised":
            lam_a = fixed_lam_a if fixed_lam_a is not None else max(float(rng.beta(alpha, alpha)), 1e-12)
            lam_p = fixed_lam_p if fixed_lam_p is not None else float(rng.uniform(0.9, 1.0))
            coef = MixCoefficients(lam_a, lam_p, "beta")
            meta.update(lambda_a=coef.lambda_a, lambda_p=coef.lambda_p, branch=coef.source)
            labels = (int(dataset.labels[i]), int(dataset.labels[j]))
            mixed, _weights = supervised_mix(anchor, other, labels, coef)
            return mixed, meta
        if method == "linear":
            lam = fixed_lam_a if fixed_lam_a is not None else float(rng.uniform(*baseline["linear"]["lam"]))
            meta.update(lambda_a=lam, branch="fixed" if fixed_lam_a is not None else "uniform")
            return linear_mix(anchor, other, lam), meta
        if method == "geometric":
            lam = fixed_lam_a if fixed_lam_a is not None else float(rng.uniform(*baseline["geometric"]["lam"]))
            meta.update(lambda_a=lam, branch="fixed" if fixed_lam_a is not None else "uniform")
            return geometric_mix(anchor, other, lam), meta
        if method == "amplitude":
            lam = fixed_lam_a if fixed_lam_a is not None else float(rng.uniform(*baseline["amplitude"]["lam"]))
            meta.update(lambda_a=lam, branch="fixed" if fixed_lam_a is not None else "uniform")
            return amplitude_mix(anchor, other, lam), meta
        if method == "binary":
            rho_range = settings.get("rho-range", None)
            rho_range = _parse_range(rho_range) if rho_range else baseline["binary"]["rho"]
            rho = float(rng.uniform(*rho_range))
            meta.update(lambda_a=rho, branch="uniform")
            return binary_mix(anchor, other, (rho, rho), rng), meta
        # cutmix / specmix
        key = "cutmix" if method == "cutmix" else "specmix"
        b_range = settings.get("b-range", None)
        a_range = settings.get("a-range", None)
        b_range = _parse_range(b_range) if b_range else baseline[key]["b"]
        a_range = _parse_range(a_range) if a_range else baseline[key]["a"]
        b = float(rng.uniform(*b_range))
        a = float(rng.uniform(*a_range))
        meta.update(branch="uniform", cut_start=b, cut_frac=a)
        mixer = cut_mix if method == "cutmix" else spec_mix
        return mixer(anchor, other, (b, b), (a, a), rng), meta

    indices = range(len(dataset))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(mix_one, indices))
    else:
        results = [mix_one(i) for i in indices]

    mixed_samples = [r[0] for r in results]
    sidecar = {
        "seed": seed,
        "method": method,
        "profile": profile,
        "input": str(input_path),
        "samples": [r[1] for r in results],
    }
    out = LabeledDataset(mixed_samples, dataset.labels, dataset.ids)
    _write_dataset(out, output_path)
    with open(str(output_path) + ".json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"augmented {len(out)} samples with {method} -> {output_path}")
    return 0


def cmd_demo_destructive(args: argparse.Namespace) -> int:
    settings = Settings(args, "demo-destructive")
    seed = settings.get("seed", 0, int)
    out_dir = settings.get("output-dir")
    if not out_dir:
        raise InvalidSpecError("demo-destructive requires --output-dir")
    length = settings.get("length", 256, int)
    sample_rate = settings.get("sample-rate", 32.0, float)
    freq = settings.get("freq", 4.0, float)
    lambdas = settings.get("lambdas", None)
    lambdas = _parse_float_list(lambdas) if lambdas else [0.5, 0.8, 0.9, 0.95]
    n_offsets = settings.get("n-offsets", 25, int)
    band_text = settings.get("band", None)
    if band_text:
        band = BandSpec(*_parse_range(band_text))
    else:
        width = 2 * sample_rate / length
        band = BandSpec(freq - width, freq + width)

    example_lam = lambdas[-1]
    pair_spec = AdversarialPairSpec(example_lam, band, freq)
    anchor, other = adversarial_pair(pair_spec, length, sample_rate, _rng(seed, _PHASE_STREAM))

    offsets = np.linspace(-np.pi, np.pi, n_offsets + 1)[1:]
    ratios = sorted({1.0} | {lam / (1.0 - lam) for lam in lambdas if lam < 1.0})
    points = destruction_sweep(anchor, offsets, np.array(ratios), np.array(lambdas), band)

    os.makedirs(out_dir, exist_ok=True)
    write_sweep_csv(points, os.path.join(out_dir, "sweep.csv"))

    linear_example = linear_mix(anchor, other, example_lam)
    tailored_example = tailored_mix(
        anchor, other, MixCoefficients(example_lam, example_lam, "fixed")
    )
    for name, ts in (
        ("anchor", anchor),
        ("linear_mixed", linear_example),
        ("tailored_mixed", tailored_example),
    ):
        _write_waveform_csv(ts, os.path.join(out_dir, f"{name}.csv"))
    print(f"wrote sweep ({len(points)} cells) and example waveforms to {out_dir}")
    return 0


def _write_waveform_csv(ts: TimeSeries, path: str) -> None:
    header = "t," + ",".join(f"ch{c}" for c in range(ts.channels))
    lines = [header]
    for n in range(ts.length):
        t = n / ts.sample_rate_hz
        values = ",".join(repr(float(v)) for v in ts.data[:, n])
        lines.append(f"{t!r},{values}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_validate(args: argparse.Namespace) -> int:
    settings = Settings(args, "validate")
    original_path = settings.get("original")
    augmented_path = settings.get("augmented")
    band_text = settings.get("band")
    if not (original_path and augmented_path and band_text):
        raise InvalidSpecError("validate requires --original, --augmented, and --band")
    band = BandSpec(*_parse_range(band_text))
    tolerance = settings.get("tolerance", 1e-9, float)
    sample_rate = settings.get("sample-rate", 1.0, float)
    audit_csv = settings.get("audit-csv")

    original = _read_dataset(original_path, sample_rate)
    augmented = _read_dataset(augmented_path, sample_rate)
    with open(str(augmented_path) + ".json", "r", encoding="utf-8") as fh:
        sidecar = json.load(fh)

    # binary files store f32: the mixed signal read back differs from the
    # computed one by up to L * 2^-24 * max|x| per amplitude bin, so widen
    # the tolerance by that provable quantization bound (CSV stores full
    # precision and gets no widening)
    stored_f32 = not str(augmented_path).endswith(".csv")

    rows = []
    worst = np.inf
    failures = 0
    for entry in sidecar["samples"]:
        if entry["lambda_a"] is None:
            raise InvalidSpecError(
                f"sample {entry['id']}: method {entry['method']!r} records no lambda_a to audit"
            )
        anchor = original.samples[original.index_of(entry["id"])]
        other = original.samples[original.index_of(entry["partner"])]
        mixed = augmented.samples[augmented.index_of(entry["id"])]
        coef = MixCoefficients(
            entry["lambda_a"], entry["lambda_p"] if entry["lambda_p"] else 1.0, "fixed"
        )
        audit = audit_mix(anchor, other, mixed, coef, band)
        allowance = 0.0
        if stored_f32:
            allowance = mixed.length * 2.0**-24 * float(np.max(np.abs(mixed.data)))
        ok = audit.min_bound_margin >= -(tolerance + allowance)
        failures += 0 if ok else 1
        worst = min(worst, audit.min_bound_margin)
        rows.append((entry, audit, ok))

    if audit_csv:
        lines = [
            "id,partner,lambda_a,anchor_band_power,other_band_power,mixed_band_power,min_bound_margin,bound_ok"
        ]
        for entry, audit, ok in rows:
            lines.append(
                f"{entry['id']},{entry['partner']},{entry['lambda_a']!r},"
                f"{audit.anchor_band_power!r},{audit.other_band_power!r},"
                f"{audit.mixed_band_power!r},{audit.min_bound_margin!r},{int(ok)}"
            )
        with open(audit_csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    n = len(rows)
    print(f"audited samples   {n}")
    note = " + f32 storage allowance" if stored_f32 else ""
    print(f"bounds satisfied  {n - failures}/{n} (tolerance {tolerance:g}{note})")
    print(f"worst margin      {worst:.3e}")
    mean_ratio = np.mean(
        [a.mixed_band_power / a.anchor_band_power for _, a, _ in rows if a.anchor_band_power > 0]
    )
    print(f"mean band-power retention vs anchor  {mean_ratio:.6f}")
    return 0 if failures == 0 else 1


def cmd_gen_synth(args: argparse.Namespace) -> int:
    settings = Settings(args, "gen-synth")
    seed = settings.get("seed", 0, int)
    output_path = settings.get("output")
    if not output_path:
        raise InvalidSpecError("gen-synth requires --output")
    bands_text = settings.get("class-bands", "1:2,3:4,5:6,7:8")
    bands = tuple(BandSpec(*_parse_range(tok)) for tok in bands_text.split(","))
    spec = SynthSpec(
        n_classes=settings.get("n-classes", len(bands), int),
        class_bands=bands,
        length=settings.get("length", 256, int),
        sample_rate_hz=settings.get("sample-rate", 32.0, float),
        n_harmonics=settings.get("n-harmonics", 1, int),
        freq_jitter=settings.get("freq-jitter", 0.0, float),
        phase_jitter=settings.get("phase-jitter", 0.0, float),
        noise_sigma=settings.get("noise-sigma", 0.0, float),
        n_channels=settings.get("n-channels", 1, int),
    )
    n_per_class = settings.get("n-per-class", 50, int)
    dataset = generate_labeled(spec, n_per_class, _rng(seed, _SAMPLE_STREAM))
    _write_dataset(dataset, output_path)
    print(f"wrote {len(dataset)} samples ({spec.n_classes} classes) -> {output_path}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master RNG seed (default 0)")
    parser.add_argument("--config", default=None, help="INI config file; flags override it")
    parser.add_argument("--profile", default=None, choices=sorted(PROFILES), help="parameter preset")
    parser.add_argument("--threads", type=int, default=None, help="batch worker count (default 1)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsmix", description="Frequency-domain mixup augmentation for time series"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="mix every sample with a partner from the same file")
    _add_common(p)
    p.add_argument("--input", default=None, help="input dataset (.tsmx binary or .csv)")
    p.add_argument("--output", default=None, help="output dataset; sidecar goes to <output>.json")
    p.add_argument("--method", default=None, choices=METHODS)
    p.add_argument("--sample-rate", type=float, default=None, help="sample rate for CSV inputs")
    p.add_argument("--pairing", default=None, help="CSV anchor_id,partner_id; default random")
    p.add_argument("--embeddings", default=None, help="embeddings CSV for similarity gating")
    p.add_argument("--embed-bands", type=int, default=None, help="bands for built-in embeddings")
    p.add_argument("--lambda-a", type=float, default=None, help="fix the amplitude coefficient")
    p.add_argument("--lambda-p", type=float, default=None, help="fix the phase coefficient")
    p.add_argument("--alpha", type=float, default=None, help="beta parameter for supervised draws")
    p.add_argument("--no-normalize", action="store_const", const=True, default=None,
                   help="disable partner power normalization in tailored mixing")
    p.add_argument("--rho-range", default=None, help="binary keep-probability range lo:hi")
    p.add_argument("--b-range", default=None, help="cut start range lo:hi")
    p.add_argument("--a-range", default=None, help="cut length range lo:hi")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("demo-destructive", help="sweep interference grids, emit CSVs")
    _add_common(p)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--sample-rate", type=float, default=None)
    p.add_argument("--freq", type=float, default=None, help="tone frequency (must sit on a bin)")
    p.add_argument("--lambdas", default=None, help="comma-separated mixing weights")
    p.add_argument("--n-offsets", type=int, default=None)
    p.add_argument("--band", default=None, help="band of interest lo:hi (Hz)")
    p.set_defaults(func=cmd_demo_destructive)

    p = sub.add_parser("validate", help="audit augmented samples against the amplitude floor")
    _add_common(p)
    p.add_argument("--original", default=None, help="dataset the augmentation read")
    p.add_argument("--augmented", default=None, help="dataset the augmentation wrote")
    p.add_argument("--band", default=None, help="band of interest lo:hi (Hz)")
    p.add_argument("--sample-rate", type=float, default=None, help="sample rate for CSV inputs")
    p.add_argument("--tolerance", type=float, default=None, help="bound margin tolerance")
    p.add_argument("--audit-csv", default=None, help="write per-sample audit rows here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen-synth", help="generate a band-labeled synthetic dataset")
    _add_common(p)
    p.add_argument("--output", default=None)
    p.add_argument("--class-bands", default=None, help="comma-separated lo:hi bands, one per class")
    p.add_argument("--n-classes", type=int, default=None)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--sample-rate", type=float, default=None)
    p.add_argument("--n-harmonics", type=int, default=None)
    p.add_argument("--freq-jitter", type=float, default=None)
    p.add_argument("--phase-jitter", type=float, default=None)
    p.add_argument("--noise-sigma", type=float, default=None)
    p.add_argument("--n-channels", type=int, default=None)
    p.add_argument("--n-per-class", type=int, default=None)
    p.set_defaults(func=cmd_gen_synth)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        # TsmixError subclasses ValueError; json decode errors are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
