"""File formats: token sequences, model JSON, and planted-target JSON.

Sequence files are UTF-8 text with whitespace-separated tokens (newlines
count as spaces); char mode treats each non-whitespace character as a
token. Model files carry weights as fixed-precision decimal strings so the
weight-table bits survive a round trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .encoding import Model
from .rules import Rule
from .sequence import Alphabet, FrequencyTable, Sequence


def parse_tokens(text: str, char_mode: bool = False) -> list[str]:
    if char_mode:
        return [ch for ch in text if not ch.isspace()]
    return text.split()


def parse_sequence(
    text: str, char_mode: bool = False, alphabet: Alphabet | None = None
) -> Sequence:
    tokens = parse_tokens(text, char_mode)
    if not tokens:
        raise ValueError("empty input")
    if alphabet is None:
        alphabet = Alphabet(set(tokens))
    return Sequence.from_tokens(alphabet, tokens)


def read_sequence(
    path: str | Path, char_mode: bool = False, alphabet: Alphabet | None = None
) -> Sequence:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_sequence(text, char_mode, alphabet)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def write_sequence(s: Sequence, path: str | Path) -> None:
    Path(path).write_text(" ".join(s.tokens) + "\n", encoding="utf-8")


def model_to_dict(m: Model) -> dict:
    if any(not 0.0 < w < 1.0 for w in m.weights):
        raise ValueError("normalize weights into (0, 1) before saving")
    return {
        "alphabet": list(m.alphabet.tokens),
        "frequencies": {
            m.alphabet.token_of(i): c
            for i, c in enumerate(m.freq.counts)
            if c
        },
        "n": m.freq.n,
        "precision": m.precision,
        "rules": [
            {
                "antecedent": [m.alphabet.token_of(i) for i in r.antecedent],
                "consequent": [m.alphabet.token_of(i) for i in r.consequent],
                "weight": f"{w:.{m.precision}f}",
            }
            for r, w in zip(m.rules, m.weights)
        ],
    }


def model_to_json(m: Model) -> str:
    return json.dumps(model_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def model_from_dict(obj: dict) -> Model:
    try:
        tokens = obj["alphabet"]
        counts_by_token = obj["frequencies"]
        n = int(obj["n"])
        precision = int(obj["precision"])
        raw_rules = obj["rules"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed model: missing field {exc}") from None
    alphabet = Alphabet(tokens)
    if list(alphabet.tokens) != list(tokens):
        raise ValueError("malformed model: alphabet not in canonical order")
    counts = [0] * len(alphabet)
    for token, count in counts_by_token.items():
        counts[alphabet.id_of(token)] = int(count)
    freq = FrequencyTable(alphabet, counts, n)
    rules = []
    weights = []
    for entry in raw_rules:
        rules.append(
            Rule.from_tokens(alphabet, entry["antecedent"], entry["consequent"])
        )
        weights.append(float(entry["weight"]))
    return Model(alphabet, freq, tuple(rules), tuple(weights), precision)


def save_model(m: Model, path: str | Path) -> None:
    Path(path).write_text(model_to_json(m), encoding="utf-8")


def load_model(path: str | Path) -> Model:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON: {exc}") from None
    try:
        return model_from_dict(obj)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def save_targets(
    rules: Iterable[Rule], alphabet: Alphabet, path: str | Path
) -> None:
    payload = [
        {
            "antecedent": list(r.tokens(alphabet)[0]),
            "consequent": list(r.tokens(alphabet)[1]),
        }
        for r in rules
    ]
    Path(path).write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def load_targets(path: str | Path, alphabet: Alphabet) -> tuple[Rule, ...]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON: {exc}") from None
    try:
        return tuple(
            Rule.from_tokens(alphabet, e["antecedent"], e["consequent"])
            for e in payload
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed targets: {exc}") from None
