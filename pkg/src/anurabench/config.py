"""Pipeline configuration: every knob the benchmark exposes, with the
defaults the reproduction uses. A flat key=value config file mirrors the CLI
flag names; flags override file values.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .dataset import SchemaConfig
from .errors import PipelineError

SEED_SPLIT_OFFSET = 1
SEED_FOLD_OFFSET = 2
SEED_ICA_OFFSET = 3
SEED_MODEL_OFFSET = 10  # + model kind index


@dataclass(frozen=True)
class PipelineConfig:
    data_path: str | None = None
    label_column: str = "Species"
    drop_columns: tuple[str, ...] = ("Family", "Genus", "RecordID")
    delimiter: str = ","
    has_header: bool = True

    k_sigma: float = 3.0
    sigma_mode: str = "population"  # or "sample"

    pca_components: int = 10
    reduce_on: str = "clean"  # or "stand": fit PCA/ICA on standardized data
    ica_seed: int | None = None  # None derives from master_seed
    ica_tol: float = 1e-4
    ica_max_iter: int = 200

    knn_k: int = 5
    svm_c: float = 1.0
    svm_gamma: str | float = "scale"
    svm_tol: float = 1e-3
    svm_quiet_passes: int = 5
    lr_lambda: float = 1e-4
    lr_step: float = 1.0
    lr_max_iter: int = 500
    lr_tol: float = 1e-6
    nb_var_floor: float = 1e-9
    cart_max_depth: int | None = None
    cart_min_split: int = 2

    train_fraction: float = 0.8
    cv_folds: int = 10
    cv_shuffle: bool = True
    cv_stratified: bool = True
    leakage_mode: str = "strict"  # or "paper"
    master_seed: int = 42
    jobs: int = 1
    audit_leakage: bool = False

    output_dir: str = "out"
    formats: tuple[str, ...] = ("json", "csv", "markdown")
    save_models: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise PipelineError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if self.cv_folds < 2:
            raise PipelineError(f"cv_folds must be >= 2, got {self.cv_folds}")
        if self.leakage_mode not in ("strict", "paper"):
            raise PipelineError(f"leakage_mode must be strict or paper, got {self.leakage_mode!r}")
        if self.reduce_on not in ("clean", "stand"):
            raise PipelineError(f"reduce_on must be clean or stand, got {self.reduce_on!r}")
        if self.k_sigma <= 0:
            raise PipelineError(f"k_sigma must be positive, got {self.k_sigma}")
        if self.pca_components < 1:
            raise PipelineError(f"pca_components must be >= 1, got {self.pca_components}")
        if self.jobs < 1:
            raise PipelineError(f"jobs must be >= 1, got {self.jobs}")
        if self.knn_k < 1 or self.svm_c <= 0 or self.svm_tol <= 0 or self.lr_step <= 0:
            raise PipelineError("model hyperparameters out of range")

    def schema(self) -> SchemaConfig:
        return SchemaConfig(
            label_column=self.label_column,
            drop_columns=tuple(self.drop_columns),
            delimiter=self.delimiter,
            has_header=self.has_header,
        )

    # --- seed fan-out -------------------------------------------------------

    @property
    def split_seed(self) -> int:
        return self.master_seed + SEED_SPLIT_OFFSET

    @property
    def fold_seed(self) -> int:
        return self.master_seed + SEED_FOLD_OFFSET

    @property
    def effective_ica_seed(self) -> int:
        return self.master_seed + SEED_ICA_OFFSET if self.ica_seed is None else self.ica_seed

    def model_seed(self, kind_index: int) -> int:
        return self.master_seed + SEED_MODEL_OFFSET + kind_index

    def hyperparameters(self, kind: str) -> dict:
        return {
            "LR": {
                "lam": self.lr_lambda,
                "step": self.lr_step,
                "max_iter": self.lr_max_iter,
                "tol": self.lr_tol,
            },
            "LDA": {},
            "KNN": {"k": self.knn_k},
            "CART": {
                "max_depth": self.cart_max_depth,
                "min_samples_split": self.cart_min_split,
            },
            "NB": {"var_floor": self.nb_var_floor},
            "SVM": {
                "C": self.svm_c,
                "gamma": self.svm_gamma,
                "tol": self.svm_tol,
                "quiet_passes": self.svm_quiet_passes,
            },
        }[kind]


# --- flat key=value config files -------------------------------------------------

_BOOL_FIELDS = {"has_header", "cv_shuffle", "cv_stratified", "audit_leakage", "save_models"}
_TUPLE_FIELDS = {"drop_columns", "formats"}
_OPTIONAL_INT_FIELDS = {"ica_seed", "cart_max_depth"}


def _parse_value(name: str, text: str):
    text = text.strip()
    if name in _BOOL_FIELDS:
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise PipelineError(f"config key {name}: expected a boolean, got {text!r}")
    if name in _TUPLE_FIELDS:
        return tuple(part.strip() for part in text.split(",") if part.strip())
    if name in _OPTIONAL_INT_FIELDS:
        return None if low_none(text) else int(text)
    if name == "svm_gamma":
        return text if text == "scale" else float(text)
    if name == "data_path":
        return None if low_none(text) else text
    blueprint = PipelineConfig.__dataclass_fields__[name].default
    if isinstance(blueprint, bool):
        return text.lower() in ("1", "true", "yes", "on")
    if isinstance(blueprint, int):
        return int(text)
    if isinstance(blueprint, float):
        return float(text)
    return text


def low_none(text: str) -> bool:
    return text.lower() in ("", "none", "null")


def config_from_file(path) -> dict:
    """Read a flat `key = value` document into a field dict."""
    path = Path(path)
    if not path.is_file():
        raise PipelineError(f"config file not found: {path}")
    known = {f.name for f in fields(PipelineConfig)}
    values = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise PipelineError(f"config line {lineno}: expected key = value, got {line!r}")
        key, _, raw = stripped.partition("=")
        name = key.strip().replace("-", "_")
        if name not in known:
            raise PipelineError(f"config line {lineno}: unknown key {key.strip()!r}")
        values[name] = _parse_value(name, raw)
    return values


def config_to_file(config: PipelineConfig, path) -> None:
    """Write the full effective configuration as a reloadable manifest."""
    lines = ["# anurabench run manifest: full effective configuration"]
    for f in fields(PipelineConfig):
        value = getattr(config, f.name)
        if value is None:
            text = "none"
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, tuple):
            text = ",".join(value)
        else:
            text = str(value)
        lines.append(f"{f.name.replace('_', '-')} = {text}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_config(file_values: dict | None = None, flag_values: dict | None = None) -> PipelineConfig:
    """Layer config sources: defaults, then file, then explicit flags."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (flag_values or {}).items() if v is not None})
    try:
        return PipelineConfig(**merged)
    except TypeError as exc:
        raise PipelineError(str(exc)) from None
