"""Writes mini_census.csv: a 500-row census-layout fixture for CLI golden runs.

The rows are synthetic. They follow the column layout and label vocabulary
of the census-income KDD extract so the shipped schema applies unchanged.
Run once; the output is committed.
"""
import csv
import json
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).parent
N_ROWS = 500

schema = json.loads((HERE / "census_kdd.schema.json").read_text())
names = [c["name"] for c in schema["columns"]]
rng = np.random.default_rng(20240611)

countries = ["United-States"] * 8 + ["Mexico", "Philippines", "Germany", "India", "Canada"]
races = ["White"] * 6 + ["Black", "Asian or Pacific Islander", "Other"]
classes = ["Private"] * 6 + ["Local government", "Self-employed-not incorporated", "State government"]
citizenship = ["Native- Born in the United States"] * 6 + [
    "Foreign born- U S citizen by naturalization",
    "Foreign born- Not a citizen of U S",
]
marital = ["Married-civilian spouse present", "Never married", "Divorced", "Widowed", "Separated"]

rows = []
for _ in range(N_ROWS):
    male = rng.random() < 0.52
    age = int(rng.integers(18, 66))
    industry = int(rng.integers(1, 51))
    occupation = int(rng.integers(1, 46))
    weight = float(np.round(rng.uniform(300.0, 4000.0), 2))
    country = countries[rng.integers(len(countries))]
    wage = 520.0 + 6.5 * (age - 18) + 4.0 * occupation + (110.0 if male else 0.0)
    wage += (-25.0 if country != "United-States" else 0.0) + rng.normal(0.0, 180.0)
    wage = int(max(round(wage / 5.0) * 5, 20))
    if rng.random() < 0.06:
        wage = 0
    cls = classes[rng.integers(len(classes))]
    if rng.random() < 0.02:
        cls = "Not in universe"
    if rng.random() < 0.02:
        country = "?"
    moved = "Yes" if rng.random() < 0.8 else "No"
    if rng.random() < 0.01:
        moved = "Not in universe under 1 year old"
    values = {
        "age": age,
        "class of worker": cls,
        "detailed industry recode": industry,
        "detailed occupation recode": occupation,
        "education": "Bachelors degree(BA AB BS)" if rng.random() < 0.3 else "High school graduate",
        "wage per hour": wage,
        "enroll in edu inst last wk": "Not in universe",
        "marital stat": marital[rng.integers(len(marital))],
        "major industry code": "Retail trade",
        "major occupation code": "Sales",
        "race": races[rng.integers(len(races))],
        "hispanic origin": "All other",
        "sex": "Male" if male else "Female",
        "member of a labor union": "No",
        "reason for unemployment": "Not in universe",
        "full or part time employment stat": "Full-time schedules",
        "capital gains": 0,
        "capital losses": 0,
        "dividends from stocks": int(rng.integers(0, 3)) * 100,
        "tax filer stat": "Joint both under 65",
        "region of previous residence": "Not in universe",
        "state of previous residence": "Not in universe",
        "detailed household and family stat": "Householder",
        "detailed household summary in household": "Householder",
        "instance weight": weight,
        "migration code-change in msa": "Nonmover",
        "migration code-change in reg": "Nonmover",
        "migration code-move within reg": "Nonmover",
        "live in this house 1 year ago": moved,
        "migration prev res in sunbelt": "Not in universe",
        "num persons worked for employer": int(rng.integers(1, 7)),
        "family members under 18": "Not in universe",
        "country of birth father": country,
        "country of birth mother": country,
        "country of birth self": country,
        "citizenship": citizenship[0] if country == "United-States" else citizenship[6 + rng.integers(2)],
        "own business or self employed": 0,
        "fill inc questionnaire for veteran's admin": "Not in universe",
        "veterans benefits": 2,
        "weeks worked in year": 52,
        "year": 95,
        "income": "- 50000.",
    }
    rows.append([values[n] for n in names])

with open(HERE / "mini_census.csv", "w", newline="") as fh:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(names)
    writer.writerows(rows)
