"""Seeded synthetic datasets matching the three bundled schemas.

The real source datasets are not redistributable with this package, so the
harness fabricates tables with the same shapes, column types, and a known
ground-truth signal. The attrition signal is a logistic model over income,
tenure, age, work-life balance, and job satisfaction (plus overtime), which
keeps those columns the most informative ones for the trained model.
"""
from __future__ import annotations

import csv
import io

import numpy as np

_HR_ROLES = ["Sales Executive", "Research Scientist", "Laboratory Technician",
             "Manufacturing Director", "Healthcare Representative", "Manager",
             "Sales Representative", "Research Director", "Human Resources"]
_HR_FIELDS = ["Life Sciences", "Medical", "Marketing", "Technical Degree",
              "Human Resources", "Other"]
_HR_DEPTS = ["Sales", "Research & Development", "Human Resources"]
_HR_TRAVEL = ["Non-Travel", "Travel_Rarely", "Travel_Frequently"]


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _to_csv(header: list[str], columns: dict[str, list]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    n = len(next(iter(columns.values())))
    for i in range(n):
        writer.writerow([columns[h][i] for h in header])
    return buf.getvalue().encode()


def generate_hr_csv(rows: int = 1470, seed: int = 0,
                    missing_rate: float = 0.01) -> bytes:
    """Employee table with 35 columns and a ~16% attrition rate."""
    rng = np.random.default_rng(seed)
    age = np.clip(rng.normal(37, 9, rows).round(), 18, 60)
    total_years = np.clip(age - 18 - rng.exponential(4, rows), 0, None).round()
    years_at_company = np.clip(total_years * rng.beta(2, 3, rows), 0, None).round()
    years_in_role = np.clip(years_at_company * rng.beta(2, 2, rows), 0, None).round()
    job_level = np.clip((total_years / 8).round() + 1, 1, 5)
    monthly_income = (1800 + 2400 * job_level
                      + rng.normal(0, 900, rows)).clip(1000).round()
    wlb = rng.integers(1, 5, rows)
    job_sat = rng.integers(1, 5, rows)
    overtime = rng.random(rows) < 0.28

    z = (-1.3 * (monthly_income - monthly_income.mean()) / monthly_income.std()
         - 1.0 * (years_at_company - years_at_company.mean()) / years_at_company.std()
         - 0.8 * (age - age.mean()) / age.std()
         - 0.65 * (wlb - wlb.mean()) / wlb.std()
         - 0.55 * (job_sat - job_sat.mean()) / job_sat.std()
         + 0.6 * overtime
         + rng.normal(0, 0.9, rows))
    threshold = np.quantile(z, 0.84)  # top 16% leave
    attrition = z > threshold

    def ints(lo, hi):
        return rng.integers(lo, hi + 1, rows)

    columns = {
        "Age": age.astype(int).tolist(),
        "Attrition": ["Yes" if a else "No" for a in attrition],
        "BusinessTravel": [_HR_TRAVEL[i] for i in rng.integers(0, 3, rows)],
        "DailyRate": ints(102, 1499).tolist(),
        "Department": [_HR_DEPTS[i] for i in rng.choice(3, rows, p=[0.3, 0.62, 0.08])],
        "DistanceFromHome": ints(1, 29).tolist(),
        "Education": ints(1, 5).tolist(),
        "EducationField": [_HR_FIELDS[i] for i in rng.integers(0, len(_HR_FIELDS), rows)],
        "EmployeeCount": [1] * rows,
        "EmployeeNumber": list(range(1, rows + 1)),
        "EnvironmentSatisfaction": ints(1, 4).tolist(),
        "Gender": ["Female" if g else "Male" for g in rng.random(rows) < 0.4],
        "HourlyRate": ints(30, 100).tolist(),
        "JobInvolvement": ints(1, 4).tolist(),
        "JobLevel": job_level.astype(int).tolist(),
        "JobRole": [_HR_ROLES[i] for i in rng.integers(0, len(_HR_ROLES), rows)],
        "JobSatisfaction": job_sat.astype(int).tolist(),
        "MaritalStatus": [["Single", "Married", "Divorced"][i]
                          for i in rng.choice(3, rows, p=[0.32, 0.46, 0.22])],
        "MonthlyIncome": monthly_income.astype(int).tolist(),
        "MonthlyRate": ints(2094, 26999).tolist(),
        "NumCompaniesWorked": ints(0, 9).tolist(),
        "Over18": ["Y"] * rows,
        "OverTime": ["Yes" if o else "No" for o in overtime],
        "PercentSalaryHike": ints(11, 25).tolist(),
        "PerformanceRating": ints(3, 4).tolist(),
        "RelationshipSatisfaction": ints(1, 4).tolist(),
        "StandardHours": [80] * rows,
        "StockOptionLevel": ints(0, 3).tolist(),
        "TotalWorkingYears": total_years.astype(int).tolist(),
        "TrainingTimesLastYear": ints(0, 6).tolist(),
        "WorkLifeBalance": wlb.astype(int).tolist(),
        "YearsAtCompany": years_at_company.astype(int).tolist(),
        "YearsInCurrentRole": years_in_role.astype(int).tolist(),
        "YearsSinceLastPromotion": ints(0, 15).tolist(),
        "YearsWithCurrManager": np.minimum(years_in_role, ints(0, 17)).astype(int).tolist(),
    }
    # sprinkle missing values into one imputable numeric column
    if missing_rate > 0:
        holes = rng.random(rows) < missing_rate
        columns["NumCompaniesWorked"] = [
            "" if h else v for h, v in zip(holes, columns["NumCompaniesWorked"])]
    return _to_csv(list(columns), columns)


def generate_adult_csv(rows: int = 48842, seed: int = 0) -> bytes:
    """Census-style income table: 14 features plus a binary income target."""
    rng = np.random.default_rng(seed)
    age = np.clip(rng.normal(38, 13, rows).round(), 17, 90)
    education_num = np.clip(rng.normal(10, 2.5, rows).round(), 1, 16)
    hours = np.clip(rng.normal(40, 12, rows).round(), 1, 99)
    capital_gain = np.where(rng.random(rows) < 0.08,
                            rng.exponential(12000, rows), 0.0).round()
    capital_loss = np.where(rng.random(rows) < 0.05,
                            rng.exponential(1800, rows), 0.0).round()
    z = (0.9 * (education_num - 10) / 2.5 + 0.6 * (age - 38) / 13
         + 0.5 * (hours - 40) / 12 + 1.4 * (capital_gain > 5000)
         + rng.normal(0, 1.0, rows))
    income = z > np.quantile(z, 0.76)

    workclass = ["Private", "Self-emp-not-inc", "Local-gov", "State-gov",
                 "Federal-gov", "Self-emp-inc"]
    education = ["HS-grad", "Some-college", "Bachelors", "Masters", "Assoc-voc",
                 "11th", "Doctorate"]
    marital = ["Married-civ-spouse", "Never-married", "Divorced", "Widowed"]
    occupation = ["Prof-specialty", "Craft-repair", "Exec-managerial",
                  "Adm-clerical", "Sales", "Other-service", "Transport-moving"]
    relationship = ["Husband", "Not-in-family", "Own-child", "Unmarried", "Wife"]
    race = ["White", "Black", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other"]
    country = ["United-States", "Mexico", "Philippines", "Germany", "Canada"]

    columns = {
        "age": age.astype(int).tolist(),
        "workclass": [workclass[i] for i in rng.integers(0, len(workclass), rows)],
        "fnlwgt": rng.integers(12285, 1484705, rows).tolist(),
        "education": [education[i] for i in rng.integers(0, len(education), rows)],
        "education_num": education_num.astype(int).tolist(),
        "marital_status": [marital[i] for i in rng.integers(0, len(marital), rows)],
        "occupation": [occupation[i] for i in rng.integers(0, len(occupation), rows)],
        "relationship": [relationship[i] for i in rng.integers(0, len(relationship), rows)],
        "race": [race[i] for i in rng.choice(len(race), rows, p=[0.78, 0.1, 0.06, 0.03, 0.03])],
        "sex": ["Male" if s else "Female" for s in rng.random(rows) < 0.66],
        "capital_gain": capital_gain.astype(int).tolist(),
        "capital_loss": capital_loss.astype(int).tolist(),
        "hours_per_week": hours.astype(int).tolist(),
        "native_country": [country[i] for i in rng.choice(len(country), rows,
                                                          p=[0.89, 0.04, 0.03, 0.02, 0.02])],
        "income": [">50K" if i else "<=50K" for i in income],
    }
    return _to_csv(list(columns), columns)


def flatten_monthly_series(values, lags: int = 3) -> dict[str, list]:
    """Turn a monthly series into lagged rows with an up/down target."""
    values = list(values)
    columns: dict[str, list] = {f"lag{k}": [] for k in range(1, lags + 1)}
    columns["month_index"] = []
    columns["direction"] = []
    for t in range(lags, len(values)):
        for k in range(1, lags + 1):
            columns[f"lag{k}"].append(values[t - k])
        columns["month_index"].append(t % 12)
        columns["direction"].append("up" if values[t] >= values[t - 1] else "down")
    return columns


def generate_bls_csv(entries: int = 720, seed: int = 0) -> bytes:
    """Monthly employment series (trend + seasonality) flattened to lag rows."""
    rng = np.random.default_rng(seed)
    t = np.arange(entries)
    series = (120_000 + 45 * t + 2500 * np.sin(2 * np.pi * t / 12)
              + rng.normal(0, 600, entries)).round(1)
    columns = flatten_monthly_series(series.tolist())
    return _to_csv(list(columns), columns)


GENERATORS = {"hr": generate_hr_csv, "adult": generate_adult_csv, "bls": generate_bls_csv}
