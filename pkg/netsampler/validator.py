"""
Config validator — pre-flight checks of a RunConfig before the harness runs.

Validation strategy (all deterministic, no graph loading):
  1. Every dataset path exists and is a file.
  2. Datasets named like a registry network are cross-checked against the
     registry's expected node and edge counts.
  3. The experiment design can produce what was asked for (residuals need at
     least three techniques; the induction sweep needs an induced technique).
  4. The output directory is usable.

Streams findings to the journal and returns a structured result consumed by
the harness and by `netsampler check`.
"""

from .config import RunConfig
from .journal import Stage, journal
from .registry import find_dataset_record


class ConfigValidator:
    """Checks a RunConfig; errors block a dataset or the run, suggestions never do."""

    def _stream(self, content: str) -> None:
        journal.progress(Stage.HARNESS, f"[Validator] {content}")

    def _check_datasets(self, config: RunConfig) -> dict[str, str]:
        """Return dataset name → error message for unreadable datasets."""
        errors: dict[str, str] = {}
        for dataset in config.datasets:
            if not dataset.path.exists():
                errors[dataset.name] = f"dataset {dataset.name!r}: file not found: {dataset.path}"
            elif not dataset.path.is_file():
                errors[dataset.name] = f"dataset {dataset.name!r}: not a regular file: {dataset.path}"
        return errors

    def _check_registry(self, config: RunConfig) -> list[str]:
        suggestions: list[str] = []
        for dataset in config.datasets:
            record = find_dataset_record(dataset.name)
            if record is None:
                continue
            if dataset.expected_n is None and dataset.expected_m is None:
                suggestions.append(
                    f"dataset {dataset.name!r} is a registry network "
                    f"(n={record['expected_n']}, m={record['expected_m']}); "
                    "add expected counts to enforce an integrity check"
                )
                continue
            for field_name in ("expected_n", "expected_m"):
                given = getattr(dataset, field_name)
                if given is not None and given != record[field_name]:
                    suggestions.append(
                        f"dataset {dataset.name!r}: {field_name}={given} differs from "
                        f"the registry value {record[field_name]}"
                    )
        return suggestions

    def _check_design(self, config: RunConfig) -> list[str]:
        suggestions: list[str] = []
        if len(config.techniques) < 3:
            suggestions.append(
                f"only {len(config.techniques)} technique(s): studentized residuals need at "
                "least 3, residual columns will be empty"
            )
        if config.induction_sweep and not any(t.induced for t in config.techniques):
            suggestions.append("induction sweep requested but no induced technique is selected")
        return suggestions

    def _check_output(self, config: RunConfig) -> list[str]:
        out = config.output_dir
        if out.exists() and not out.is_dir():
            return [f"output path {out} exists and is not a directory"]
        return []

    def validate(self, config: RunConfig) -> dict:
        """
        Validate a run configuration.

        Returns:
            {
                "valid": bool,
                "errors": [str],              # blocking issues
                "dataset_errors": {name: str},  # datasets the harness will skip
                "suggestions": [str],         # non-blocking improvements
            }
        """
        self._stream("🔍 Checking run configuration...")
        dataset_errors = self._check_datasets(config)
        errors = self._check_output(config)
        suggestions = self._check_registry(config) + self._check_design(config)

        if len(dataset_errors) == len(config.datasets):
            errors.append("no dataset is readable")

        for err in list(dataset_errors.values()) + errors:
            journal.error(Stage.HARNESS, f"[Validator] ❌ {err}")
        for sug in suggestions:
            self._stream(f"💡 {sug}")
        if not errors and not dataset_errors:
            self._stream("✅ Configuration looks good")

        return {
            "valid": not errors and not dataset_errors,
            "errors": errors,
            "dataset_errors": dataset_errors,
            "suggestions": suggestions,
        }


# Singleton
config_validator = ConfigValidator()
