"""Stratified splitting, ten-fold cross-validation, recall metrics, and the
six-forms-by-six-models benchmark grid.

Table-1 semantics: mean held-out-fold accuracy of k-fold CV run inside the
80% training portion. Table-2 semantics: a model fitted on the full 80% and
scored on the held-out 20%; the single reported number is weighted recall,
which is identically the overall accuracy.

Leakage modes: "strict" refits scalers/PCA/ICA on each fold's training part
(and on the 80% side for the test column); "paper" fits them once on the
full cleaned dataset before any splitting, which is what the published
numbers imply.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .classifiers import KINDS, ClassifierSpec
from .config import PipelineConfig
from .dataset import Dataset
from .decompose import fit_ica, fit_pca, transform_ica, transform_pca
from .errors import BadK, ClassTooSmall, GridCellError, LengthMismatch, PipelineError
from .preprocess import (
    OutlierRule,
    apply_minmax,
    apply_zscore,
    fit_minmax,
    fit_zscore,
    remove_outliers,
)

FORMS = ("raw", "clean", "norm", "stand", "pca", "ica")
FORM_LABELS = {
    "raw": "Raw", "clean": "Clean", "norm": "Norm",
    "stand": "Stand", "pca": "PCA", "ica": "ICA",
}


@dataclass(frozen=True)
class SplitPlan:
    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int
    train_fraction: float


@dataclass(frozen=True)
class FoldPlan:
    fold_assignments: np.ndarray  # fold id per row, in [0, k)
    k: int
    seed: int


@dataclass(frozen=True)
class RecallReport:
    confusion: np.ndarray  # rows true class, columns predicted
    per_class: np.ndarray
    present: np.ndarray  # bool per class: did it occur in y_true
    macro_recall: float
    weighted_recall: float
    accuracy: float


def _labels_of(data) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.labels
    return np.asarray(data, dtype=np.int64)


def stratified_split(data, fraction: float = 0.8, seed: int = 0) -> SplitPlan:
    """Per-class shuffle, then proportional allocation with largest-remainder
    rounding, so each class lands within one instance of its quota."""
    labels = _labels_of(data)
    if not 0.0 < fraction < 1.0:
        raise PipelineError(f"fraction must be in (0, 1), got {fraction}")
    n = len(labels)
    class_count = int(labels.max()) + 1 if n else 0
    rng = np.random.default_rng(seed)

    shuffled: list[np.ndarray] = []
    quotas = np.zeros(class_count)
    for c in range(class_count):
        idx = np.flatnonzero(labels == c)
        if idx.size and idx.size < 2:
            raise ClassTooSmall(c, idx.size, 2)
        shuffled.append(rng.permutation(idx))
        quotas[c] = fraction * idx.size

    floors = np.floor(quotas).astype(np.int64)
    total_train = int(np.floor(fraction * n + 0.5))
    extras = total_train - int(floors.sum())
    by_remainder = sorted(range(class_count), key=lambda c: (-(quotas[c] - floors[c]), c))
    take = floors.copy()
    for c in by_remainder[:extras]:
        take[c] += 1

    train_parts = [shuffled[c][: take[c]] for c in range(class_count)]
    test_parts = [shuffled[c][take[c]:] for c in range(class_count)]
    train = np.sort(np.concatenate(train_parts)) if train_parts else np.empty(0, np.int64)
    test = np.sort(np.concatenate(test_parts)) if test_parts else np.empty(0, np.int64)
    return SplitPlan(train_indices=train, test_indices=test, seed=seed,
                     train_fraction=fraction)


def kfold_plan(data, k: int = 10, seed: int = 0, shuffle: bool = True,
               stratified: bool = True) -> FoldPlan:
    """Round-robin fold assignment, per class when stratified. The fold
    cursor carries over between classes so overall fold sizes also differ by
    at most one."""
    labels = _labels_of(data)
    if k < 2:
        raise BadK(k)
    n = len(labels)
    rng = np.random.default_rng(seed)
    assignments = np.empty(n, dtype=np.int64)

    if stratified:
        class_count = int(labels.max()) + 1 if n else 0
        small = [c for c in range(class_count)
                 if 0 < np.count_nonzero(labels == c) < k]
        if small:
            warnings.warn(f"classes with fewer than {k} instances: {small}")
        offset = 0
        for c in range(class_count):
            idx = np.flatnonzero(labels == c)
            if shuffle:
                idx = rng.permutation(idx)
            assignments[idx] = (offset + np.arange(idx.size)) % k
            offset = (offset + idx.size) % k
    else:
        idx = rng.permutation(n) if shuffle else np.arange(n)
        assignments[idx] = np.arange(n) % k

    return FoldPlan(fold_assignments=assignments, k=k, seed=seed)


def recall_scores(y_true, y_pred, class_count: int) -> RecallReport:
    """Confusion matrix plus per-class recall TP / (TP + FN).

    Classes absent from y_true get recall 0 and are excluded from the macro
    mean; the weighted (support-weighted) mean is identically the accuracy.
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(len(y_true), len(y_pred))
    confusion = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(confusion, (y_true, y_pred), 1)
    support = confusion.sum(axis=1)
    present = support > 0
    tp = np.diag(confusion).astype(np.float64)
    per_class = np.divide(tp, support, out=np.zeros(class_count), where=present)
    macro = float(per_class[present].mean()) if present.any() else 0.0
    accuracy = float(tp.sum() / len(y_true)) if len(y_true) else 0.0
    return RecallReport(
        confusion=confusion,
        per_class=per_class,
        present=present,
        macro_recall=macro,
        weighted_recall=accuracy,
        accuracy=accuracy,
    )


# --- data-form construction ---------------------------------------------------------


@dataclass
class FormData:
    """One benchmark data form, ready for fold-wise evaluation.

    base: dataset whose rows and labels define splits for this form.
    matrix: pre-transformed features in paper mode, base features in strict.
    fitter: in strict mode, fits the form's transform on a row subset and
    returns a feature-mapping function; None for forms with no transform.
    """

    name: str
    base: Dataset
    matrix: np.ndarray
    fitter: object = None

    def pair(self, fit_rows: np.ndarray, eval_rows: np.ndarray):
        """(train features, eval features) with the transform fitted only on
        fit_rows when a fitter is present."""
        if self.fitter is None:
            return self.matrix[fit_rows], self.matrix[eval_rows]
        mapper = self.fitter(self.base, fit_rows)
        return mapper(self.matrix[fit_rows]), mapper(self.matrix[eval_rows])


def _minmax_fitter(config):
    def fit(base, rows):
        params = fit_minmax(base.take_rows(rows))
        return lambda X: apply_minmax(params, _bare(base, X)).features
    return fit


def _zscore_fitter(config):
    def fit(base, rows):
        params = fit_zscore(base.take_rows(rows), config.sigma_mode)
        return lambda X: apply_zscore(params, _bare(base, X)).features
    return fit


def _reduce_input(base, rows, config):
    """Training view for PCA/ICA: the raw clean rows, optionally standardized
    first (with moments from those same rows) when reduce_on is "stand"."""
    train = base.take_rows(rows)
    if config.reduce_on == "stand":
        params = fit_zscore(train, config.sigma_mode)
        return apply_zscore(params, train), params
    return train, None


def _pca_fitter(config):
    def fit(base, rows):
        train, zparams = _reduce_input(base, rows, config)
        model = fit_pca(train, config.pca_components)

        def mapper(X):
            ds = _bare(base, X)
            if zparams is not None:
                ds = apply_zscore(zparams, ds)
            return transform_pca(model, ds).features
        return mapper
    return fit


def _ica_fitter(config):
    def fit(base, rows):
        train, zparams = _reduce_input(base, rows, config)
        model = fit_ica(
            train,
            config.pca_components,
            seed=config.effective_ica_seed,
            max_iter=config.ica_max_iter,
            tol=config.ica_tol,
        )

        def mapper(X):
            ds = _bare(base, X)
            if zparams is not None:
                ds = apply_zscore(zparams, ds)
            return transform_ica(model, ds).features
        return mapper
    return fit


def _bare(base: Dataset, X: np.ndarray) -> Dataset:
    """Wrap a feature matrix in a throwaway Dataset for the transform API."""
    return Dataset(
        features=X,
        column_names=base.column_names,
        labels=np.zeros(len(X), dtype=np.int64),
        label_names=("_",),
        provenance=base.provenance,
    )


def build_forms(raw: Dataset, config: PipelineConfig):
    """Construct the six data forms; returns ({name: FormData}, info dict)."""
    rule = OutlierRule(k_sigma=config.k_sigma, sigma_mode=config.sigma_mode)
    clean, removed_count, removed_rows = remove_outliers(raw, rule)
    info = {
        "input_rows": raw.n_rows,
        "removed_outliers": removed_count,
        "clean_rows": clean.n_rows,
    }

    forms = {
        "raw": FormData("raw", raw, raw.features),
        "clean": FormData("clean", clean, clean.features),
    }
    if config.leakage_mode == "paper":
        all_rows = np.arange(clean.n_rows)
        norm = apply_minmax(fit_minmax(clean), clean)
        stand = apply_zscore(fit_zscore(clean, config.sigma_mode), clean)
        reduce_base, zparams = _reduce_input(clean, all_rows, config)
        pca_model = fit_pca(reduce_base, config.pca_components)
        pca = transform_pca(pca_model, reduce_base)
        ica_model = fit_ica(
            reduce_base,
            config.pca_components,
            seed=config.effective_ica_seed,
            max_iter=config.ica_max_iter,
            tol=config.ica_tol,
        )
        ica = transform_ica(ica_model, reduce_base)
        forms["norm"] = FormData("norm", clean, norm.features)
        forms["stand"] = FormData("stand", clean, stand.features)
        forms["pca"] = FormData("pca", clean, pca.features)
        forms["ica"] = FormData("ica", clean, ica.features)
        info["pca_explained_variance_ratio"] = [float(v) for v in pca_model.explained_variance_ratio]
        info["pca_ratio_sum"] = float(pca_model.explained_variance_ratio.sum())
        info["ica_iterations"] = ica_model.iterations_used
        info["ica_converged"] = ica_model.converged
    else:
        forms["norm"] = FormData("norm", clean, clean.features, _minmax_fitter(config))
        forms["stand"] = FormData("stand", clean, clean.features, _zscore_fitter(config))
        forms["pca"] = FormData("pca", clean, clean.features, _pca_fitter(config))
        forms["ica"] = FormData("ica", clean, clean.features, _ica_fitter(config))
    return forms, info


# --- the grid --------------------------------------------------------------------------


@dataclass
class CellResult:
    form: str
    model: str
    cva_per_fold: list
    cva_mean: float
    test_accuracy: float
    macro_recall: float
    weighted_recall: float
    confusion: list
    n_train: int
    n_test: int

    def to_dict(self) -> dict:
        return {
            "cva_per_fold": self.cva_per_fold,
            "cva_mean": self.cva_mean,
            "test_accuracy": self.test_accuracy,
            "macro_recall": self.macro_recall,
            "weighted_recall": self.weighted_recall,
            "confusion": self.confusion,
            "n_train": self.n_train,
            "n_test": self.n_test,
        }


@dataclass
class EvalReport:
    grid: dict  # (form, kind) -> CellResult
    metadata: dict
    audit: list

    def cell(self, form: str, kind: str) -> CellResult:
        return self.grid[(form, kind)]

    def row_mean(self, form: str, which: str) -> float:
        values = [getattr(self.grid[(form, k)], which) for k in KINDS]
        return float(np.mean(values))

    def table(self, which: str) -> list:
        """Rows: [form label, cell per model kind..., row mean]."""
        rows = []
        for form in FORMS:
            values = [getattr(self.grid[(form, k)], which) for k in KINDS]
            rows.append([FORM_LABELS[form]] + values + [float(np.mean(values))])
        return rows

    def to_dict(self, include_volatile: bool = False) -> dict:
        metadata = dict(self.metadata)
        if not include_volatile:
            metadata.pop("created_at", None)
            metadata.pop("duration_seconds", None)
        doc = {
            "format": "anurabench-report",
            "version": 1,
            "metadata": metadata,
            "grid": {
                form: {kind: self.grid[(form, kind)].to_dict() for kind in KINDS}
                for form in FORMS
            },
        }
        if self.audit:
            doc["leakage_audit"] = self.audit
        return doc

    def to_json(self, include_volatile: bool = False) -> str:
        return json.dumps(self.to_dict(include_volatile), indent=2, sort_keys=True)


@dataclass
class _CellTask:
    form: str
    kind: str
    spec: ClassifierSpec
    fold_data: list  # [(Xtr, ytr, Xva, yva), ...]
    final_data: tuple  # (Xtrain, ytrain, Xtest, ytest)
    class_count: int


def _run_cell(task: _CellTask) -> CellResult:
    try:
        cva = []
        for Xtr, ytr, Xva, yva in task.fold_data:
            model = task.spec.build().fit(Xtr, ytr)
            cva.append(float(np.mean(model.predict(Xva) == yva)))
        Xtrain, ytrain, Xtest, ytest = task.final_data
        model = task.spec.build().fit(Xtrain, ytrain)
        scores = recall_scores(ytest, model.predict(Xtest), task.class_count)
        return CellResult(
            form=task.form,
            model=task.kind,
            cva_per_fold=cva,
            cva_mean=float(np.mean(cva)),
            test_accuracy=scores.accuracy,
            macro_recall=scores.macro_recall,
            weighted_recall=scores.weighted_recall,
            confusion=scores.confusion.tolist(),
            n_train=len(ytrain),
            n_test=len(ytest),
        )
    except PipelineError as exc:
        raise GridCellError(task.form, task.kind, exc) from exc


def run_grid(raw: Dataset, config: PipelineConfig, progress=None) -> EvalReport:
    """Evaluate all six classifiers on all six data forms.

    Returns the full report; identical configuration reproduces it
    bit-for-bit, independent of the jobs count.
    """
    raw.validate()
    forms, info = build_forms(raw, config)

    audit: list = []
    tasks: list[_CellTask] = []
    for form_name in FORMS:
        form = forms[form_name]
        labels = form.base.labels
        split = stratified_split(labels, config.train_fraction, config.split_seed)
        train_rows = split.train_indices
        folds = kfold_plan(
            labels[train_rows],
            config.cv_folds,
            config.fold_seed,
            shuffle=config.cv_shuffle,
            stratified=config.cv_stratified,
        )
        fold_data = []
        for f in range(folds.k):
            fit_rows = train_rows[folds.fold_assignments != f]
            val_rows = train_rows[folds.fold_assignments == f]
            Xtr, Xva = form.pair(fit_rows, val_rows)
            fold_data.append((Xtr, labels[fit_rows], Xva, labels[val_rows]))
            if config.audit_leakage:
                audit.append({
                    "form": form_name, "stage": f"fold{f}",
                    "fitted_rows": fit_rows.tolist(),
                    "eval_rows": val_rows.tolist(),
                    "refit": form.fitter is not None,
                })
        Xtrain, Xtest = form.pair(train_rows, split.test_indices)
        final = (Xtrain, labels[train_rows], Xtest, labels[split.test_indices])
        if config.audit_leakage:
            audit.append({
                "form": form_name, "stage": "test",
                "fitted_rows": train_rows.tolist(),
                "eval_rows": split.test_indices.tolist(),
                "refit": form.fitter is not None,
            })
        for kind in KINDS:
            spec = ClassifierSpec(
                kind,
                config.hyperparameters(kind),
                seed=config.model_seed(KINDS.index(kind)),
            )
            tasks.append(_CellTask(
                form=form_name, kind=kind, spec=spec,
                fold_data=fold_data, final_data=final,
                class_count=form.base.class_count,
            ))

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(_run_cell, t) for t in tasks]
            results = []
            for t, fut in zip(tasks, futures):
                if progress:
                    progress(f"cell ({t.form}, {t.kind})")
                results.append(fut.result())
    else:
        results = []
        for t in tasks:
            if progress:
                progress(f"cell ({t.form}, {t.kind})")
            results.append(_run_cell(t))

    grid = {(r.form, r.model): r for r in results}
    metadata = {
        "package_version": __version__,
        "forms": list(FORMS),
        "models": list(KINDS),
        "label_names": list(raw.label_names),
        "leakage_mode": config.leakage_mode,
        "master_seed": config.master_seed,
        "seeds": {
            "split": config.split_seed,
            "folds": config.fold_seed,
            "ica": config.effective_ica_seed,
            "models": {k: config.model_seed(i) for i, k in enumerate(KINDS)},
        },
        "hyperparameters": {k: _jsonable(config.hyperparameters(k)) for k in KINDS},
        "train_fraction": config.train_fraction,
        "cv_folds": config.cv_folds,
        "preprocessing": info,
    }
    return EvalReport(grid=grid, metadata=metadata, audit=audit)


def _jsonable(params: dict) -> dict:
    return {k: (v if not isinstance(v, tuple) else list(v)) for k, v in params.items()}


# --- table rendering -------------------------------------------------------------------


def render_table_csv(report: EvalReport, which: str) -> str:
    header = ["Data"] + list(KINDS) + ["Mean"]
    lines = [",".join(header)]
    for row in report.table(which):
        lines.append(",".join([row[0]] + [f"{v:.4f}" for v in row[1:]]))
    return "\n".join(lines) + "\n"


def render_table_markdown(report: EvalReport, which: str, title: str) -> str:
    header = ["Data"] + list(KINDS) + ["Mean"]
    lines = [
        f"### {title}",
        "",
        "| " + " | ".join(header) + " |",
        "|" + "|".join(["---"] * len(header)) + "|",
    ]
    for row in report.table(which):
        lines.append("| " + " | ".join([row[0]] + [f"{v:.4f}" for v in row[1:]]) + " |")
    return "\n".join(lines) + "\n"
