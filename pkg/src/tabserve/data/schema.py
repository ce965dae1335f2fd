"""Dataset schemas for the three bundled workloads."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigurationError

KINDS = ("numeric", "categorical", "ordinal", "timestamp")


@dataclass(frozen=True)
class ColumnSpec:
    label: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown column kind {self.kind!r}")


@dataclass(frozen=True)
class DatasetSchema:
    name: str
    columns: tuple[ColumnSpec, ...]
    target: str
    expected_rows: int | None = None

    def __post_init__(self) -> None:
        labels = [c.label for c in self.columns]
        if len(set(labels)) != len(labels):
            raise ConfigurationError("column labels must be unique")
        if sum(1 for c in self.columns if c.label == self.target) != 1:
            raise ConfigurationError(f"schema needs exactly one target column {self.target!r}")

    @property
    def feature_columns(self) -> tuple[ColumnSpec, ...]:
        return tuple(c for c in self.columns if c.label != self.target)

    def column(self, label: str) -> ColumnSpec:
        for c in self.columns:
            if c.label == label:
                return c
        raise KeyError(label)


def hr_schema() -> DatasetSchema:
    """Employee attrition table: 35 columns, ~1.5K rows."""
    numeric = [
        "Age", "DailyRate", "DistanceFromHome", "Education", "EmployeeCount",
        "EmployeeNumber", "EnvironmentSatisfaction", "HourlyRate", "JobInvolvement",
        "JobLevel", "MonthlyIncome", "MonthlyRate", "NumCompaniesWorked",
        "PercentSalaryHike", "PerformanceRating", "RelationshipSatisfaction",
        "StandardHours", "StockOptionLevel", "TotalWorkingYears",
        "TrainingTimesLastYear", "YearsAtCompany", "YearsInCurrentRole",
        "YearsSinceLastPromotion", "YearsWithCurrManager",
    ]
    ordinal = ["JobSatisfaction", "WorkLifeBalance"]
    categorical = [
        "Attrition", "BusinessTravel", "Department", "EducationField", "Gender",
        "JobRole", "MaritalStatus", "Over18", "OverTime",
    ]
    cols = ([ColumnSpec(c, "numeric") for c in numeric]
            + [ColumnSpec(c, "ordinal") for c in ordinal]
            + [ColumnSpec(c, "categorical") for c in categorical])
    cols.sort(key=lambda c: c.label)
    return DatasetSchema(name="hr", columns=tuple(cols), target="Attrition",
                         expected_rows=1470)


def adult_schema() -> DatasetSchema:
    """Census income table: 14 features plus the income target."""
    cols = (
        ColumnSpec("age", "numeric"),
        ColumnSpec("workclass", "categorical"),
        ColumnSpec("fnlwgt", "numeric"),
        ColumnSpec("education", "categorical"),
        ColumnSpec("education_num", "numeric"),
        ColumnSpec("marital_status", "categorical"),
        ColumnSpec("occupation", "categorical"),
        ColumnSpec("relationship", "categorical"),
        ColumnSpec("race", "categorical"),
        ColumnSpec("sex", "categorical"),
        ColumnSpec("capital_gain", "numeric"),
        ColumnSpec("capital_loss", "numeric"),
        ColumnSpec("hours_per_week", "numeric"),
        ColumnSpec("native_country", "categorical"),
        ColumnSpec("income", "categorical"),
    )
    return DatasetSchema(name="adult", columns=cols, target="income",
                         expected_rows=48842)


def bls_schema() -> DatasetSchema:
    """Monthly employment series flattened to lag features plus a direction target."""
    cols = (
        ColumnSpec("lag1", "numeric"),
        ColumnSpec("lag2", "numeric"),
        ColumnSpec("lag3", "numeric"),
        ColumnSpec("month_index", "numeric"),
        ColumnSpec("direction", "categorical"),
    )
    return DatasetSchema(name="bls", columns=cols, target="direction",
                         expected_rows=717)


BUILTIN_SCHEMAS = {"hr": hr_schema, "adult": adult_schema, "bls": bls_schema}


def schema_by_name(name: str) -> DatasetSchema:
    try:
        return BUILTIN_SCHEMAS[name]()
    except KeyError:
        raise ConfigurationError(f"unknown dataset {name!r}; expected one of {sorted(BUILTIN_SCHEMAS)}")
