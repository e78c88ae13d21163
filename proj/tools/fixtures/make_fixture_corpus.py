#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the synthetic 20-study fixture corpus and its manifest.

The studies are invented. Values outside the engineered rows (age, the
subgroup subsets, metformin use, facet coverage) are drawn from a seeded RNG
so re-running produces byte-identical files.

    python3 tools/fixtures/make_fixture_corpus.py data/fixture_corpus

The manifest lands next to the corpus directory (<dir>.manifest.json) so the
loader, which reads every *.json inside the directory, never sees it.
"""

import json
import random
import sys
from pathlib import Path

rng = random.Random(20181008)


def mean_sd(mean, sd, unit):
    return {"unit": unit, "statistic": {"type": "mean_sd", "mean": mean, "sd": sd}}


def median_iqr(median, q1, q3, unit):
    return {"unit": unit,
            "statistic": {"type": "median_iqr", "median": median, "q1": q1, "q3": q3}}


def pct(value):
    return {"statistic": {"type": "percentage", "value": value}}


def r1(x):
    return round(x, 1)


# Continuous rows: label -> (unit, mean range, sd range)
CONTINUOUS = {
    "BMI": ("kg/m2", (27.0, 35.0), (4.0, 6.5)),
    "Systolic BP": ("mmHg", (126.0, 142.0), (13.0, 19.0)),
    "HbA1c": ("%", (7.0, 8.8), (0.7, 1.3)),
    "Fasting glucose": ("mg/dL", (135.0, 185.0), (30.0, 50.0)),
    "Weight": ("kg", (78.0, 98.0), (14.0, 20.0)),
    "Waist circumference": ("cm", (98.0, 112.0), (11.0, 15.0)),
    "Diastolic BP": ("mmHg", (74.0, 84.0), (8.0, 11.0)),
    "Heart rate": ("bpm", (68.0, 78.0), (9.0, 12.0)),
    "Diabetes duration": ("year", (5.0, 12.0), (3.5, 7.0)),
    "LDL cholesterol": ("mg/dL", (88.0, 115.0), (28.0, 38.0)),
    "HDL cholesterol": ("mg/dL", (40.0, 50.0), (10.0, 14.0)),
    "Triglycerides": ("mg/dL", (140.0, 190.0), (60.0, 95.0)),
    "Total cholesterol": ("mg/dL", (165.0, 195.0), (35.0, 45.0)),
    "eGFR": ("mL/min/1.73m2", (70.0, 90.0), (15.0, 22.0)),
    "Creatinine": ("umol/L", (72.0, 90.0), (16.0, 24.0)),
}
# Percentage rows
CATEGORICAL = {
    "Male": (45.0, 70.0),
    "African American": (4.0, 22.0),
    "White": (55.0, 82.0),
    "Asian": (2.0, 15.0),
    "Hispanic": (5.0, 18.0),
    "Current smoker": (8.0, 20.0),
    "Hypertension": (55.0, 85.0),
    "Coronary artery disease": (10.0, 40.0),
    "Prior myocardial infarction": (8.0, 30.0),
    "Prior stroke": (3.0, 12.0),
    "Heart failure": (4.0, 15.0),
    "Peripheral artery disease": (5.0, 14.0),
    "Chronic kidney disease": (10.0, 28.0),
    "Diabetic retinopathy": (8.0, 25.0),
    "Statin": (40.0, 75.0),
    "Aspirin": (35.0, 70.0),
    "Insulin": (10.0, 40.0),
    "Sulfonylurea": (15.0, 45.0),
    "Beta blocker": (15.0, 40.0),
    "ACE inhibitor": (20.0, 50.0),
}

FACETS = ["BMI", "Systolic BP", "HbA1c", "Fasting glucose"]


def draw_continuous(label, unit_override=None):
    unit, (mlo, mhi), (slo, shi) = CONTINUOUS[label]
    mean = r1(rng.uniform(mlo, mhi))
    sd = r1(rng.uniform(slo, shi))
    if label == "Fasting glucose" and unit_override == "mmol/L":
        return mean_sd(r1(mean / 18.0), r1(sd / 18.0), "mmol/L")
    return mean_sd(mean, sd, unit)


def draw_percentage(label):
    lo, hi = CATEGORICAL[label]
    return pct(r1(rng.uniform(lo, hi)))


def characteristic(label, body, persistence=None):
    row = {"label": label}
    if persistence:
        row["persistence"] = persistence
    row.update(body)
    return row


# Per study: id, title, registry id, arm size(s), age statistic(s), facets,
# extra continuous rows, categorical rows, drug rows, subset kind.
#
# age "pass" means upper bound (mean + 2 sd, or q3) below 70.
STUDIES = [
    dict(id="TelmisartanRamipril",
         title="Telmisartan and ramipril in patients at high vascular risk (synthetic)",
         nct="NCT00153101", facets=["BMI", "Systolic BP"],
         extra=["Diastolic BP", "LDL cholesterol", "HDL cholesterol"],
         cats=["Male", "African American", "Asian", "Current smoker", "Hypertension",
               "Coronary artery disease", "Prior myocardial infarction",
               "Peripheral artery disease", "Statin", "Aspirin", "Beta blocker"],
         drugs=[], subset="male_aa_low"),
    dict(id="MetforminCardioOutcomes",
         title="Metformin and cardiovascular outcomes in type 2 diabetes (synthetic)",
         nct="NCT90000002", size=2450, age=("mean_sd", 58.2, 5.3), facets=FACETS,
         extra=["Weight", "Diabetes duration", "LDL cholesterol", "eGFR"],
         cats=["Male", "African American", "Hispanic", "Current smoker",
               "Hypertension", "Coronary artery disease", "Statin", "Insulin"],
         drugs=["Metformin"], subset="male_aa"),
    dict(id="EmpagliflozinRenal",
         title="Empagliflozin and kidney outcomes (synthetic)",
         nct="NCT90000003", size=4124, age=("mean_sd", 63.1, 8.6), facets=FACETS,
         extra=["Weight", "Diabetes duration", "eGFR", "Creatinine"],
         cats=["Male", "African American", "Asian", "Hypertension",
               "Chronic kidney disease", "Heart failure", "Statin", "Insulin", "Sulfonylurea"],
         drugs=["Empagliflozin"], subset="male_aa"),
    dict(id="LiraglutideWeight",
         title="Liraglutide for weight management in type 2 diabetes (synthetic)",
         nct="NCT90000004", size=846, age=("mean_sd", 55.0, 6.5), facets=FACETS,
         glucose_unit="mmol/L",
         extra=["Weight", "Waist circumference", "Diabetes duration", "Triglycerides",
                "HDL cholesterol"],
         cats=["Male", "African American", "Hispanic", "Hypertension", "Statin"],
         drugs=["Liraglutide", "Metformin"], subset="male_aa"),
    dict(id="SitagliptinAddOn",
         title="Sitagliptin added to metformin (synthetic)",
         nct="NCT90000005", size=540, age=("median_iqr", 56.0, 50.0, 63.0), facets=FACETS,
         extra=["Weight", "Diabetes duration", "LDL cholesterol", "Creatinine"],
         cats=["Male", "African American", "Asian", "Hispanic", "Current smoker",
               "Hypertension"],
         drugs=["Sitagliptin", "Metformin"], subset="male_aa"),
    dict(id="GlargineTitration",
         title="Insulin glargine titration to fasting targets (synthetic)",
         nct="NCT90000006", size=1180, age=("mean_sd", 59.4, 9.1), facets=FACETS,
         extra=["Weight", "Diabetes duration", "Triglycerides", "eGFR"],
         cats=["Male", "African American", "Hispanic", "Hypertension",
               "Diabetic retinopathy", "Statin", "Sulfonylurea"],
         drugs=["Insulin glargine"], subset="male_aa",
         description="Glargine titrated weekly to fasting glucose 80-110 mg/dL"),
    dict(id="PioglitazoneProspective",
         title="Pioglitazone in macrovascular disease (synthetic)",
         nct="NCT90000007", size=2605, age=("mean_sd", 58.1, 5.6), facets=FACETS,
         extra=["Weight", "Diabetes duration", "HDL cholesterol", "LDL cholesterol"],
         cats=["Male", "African American", "Current smoker", "Hypertension",
               "Prior myocardial infarction", "Prior stroke", "Statin", "Insulin",
               "Sulfonylurea"],
         drugs=["Pioglitazone"], subset="male_aa"),
    dict(id="ObesityLifestyle",
         title="Intensive lifestyle intervention in obese adults (synthetic)",
         nct="NCT90000008", size=312, age=("mean_sd", 52.4, 7.6), facets=["BMI"],
         extra=["Weight", "Waist circumference", "Diastolic BP", "Heart rate", "Triglycerides",
                "HDL cholesterol", "Total cholesterol"],
         cats=["Male", "African American", "Hispanic", "Current smoker",
               "Hypertension", "Statin"],
         drugs=["Intensive lifestyle intervention"], subset="female_aa"),
    dict(id="GlimepirideComparator",
         title="Glimepiride versus DPP-4 inhibition (synthetic)",
         nct="NCT90000009", size=1552, age=("mean_sd", 60.0, 5.0), facets=FACETS,
         extra=["Weight", "Diabetes duration", "LDL cholesterol", "eGFR"],
         cats=["Male", "African American", "Asian", "Hispanic", "Hypertension",
               "Coronary artery disease", "Statin"],
         drugs=["Glimepiride"], subset="male_aa"),
    dict(id="DapagliflozinHeart",
         title="Dapagliflozin in heart failure with diabetes (synthetic)",
         nct="NCT90000010", size=3620, age=("median_iqr", 66.0, 59.0, 72.0), facets=FACETS,
         glucose_unit="mmol/L",
         extra=["Weight", "eGFR", "Creatinine"],
         cats=["Male", "African American", "Asian", "Hypertension", "Heart failure",
               "Prior myocardial infarction", "Beta blocker", "ACE inhibitor", "Insulin"],
         drugs=["Dapagliflozin"], subset="male_white"),
    dict(id="SemaglutideOral",
         title="Oral semaglutide glycemic efficacy (synthetic)",
         nct="NCT90000011", size=703, age=("mean_sd", 56.3, 6.2), facets=FACETS,
         extra=["Weight", "Waist circumference", "Diabetes duration", "LDL cholesterol"],
         cats=["Male", "African American", "Asian", "Hispanic", "Hypertension",
               "Statin"],
         drugs=["Semaglutide", "Metformin"], subset="male_aa"),
    dict(id="CanagliflozinElderly",
         title="Canagliflozin in older adults with type 2 diabetes (synthetic)",
         nct="NCT90000012", size=714, age=("mean_sd", 73.5, 4.6), facets=FACETS,
         extra=["Weight", "Diabetes duration", "eGFR", "Creatinine"],
         cats=["Male", "African American", "Hypertension", "Coronary artery disease",
               "Chronic kidney disease", "Statin", "Aspirin", "Insulin"],
         drugs=["Canagliflozin"], subset="male_aa"),
    dict(id="DulaglutideRewind",
         title="Dulaglutide and cardiovascular events (synthetic)",
         nct="NCT90000013", size=4949, age=("mean_sd", 66.2, 6.5), facets=FACETS,
         extra=["Weight", "Diabetes duration", "LDL cholesterol", "eGFR"],
         cats=["Male", "African American", "Hispanic", "Current smoker",
               "Hypertension", "Prior myocardial infarction", "Statin", "Insulin"],
         drugs=["Dulaglutide"], subset="male_aa"),
    dict(id="SaxagliptinSafety",
         title="Saxagliptin cardiovascular safety (synthetic)",
         nct="NCT90000014", size=8280, age=("median_iqr", 65.0, 58.0, 71.0), facets=FACETS,
         extra=["Weight", "Diabetes duration", "eGFR"],
         cats=["Male", "African American", "Asian", "Hispanic", "Hypertension",
               "Heart failure", "Statin", "Aspirin", "Sulfonylurea", "Insulin"],
         drugs=["Saxagliptin"], subset="none"),
    dict(id="AtorvastatinDiabetes",
         title="Atorvastatin for primary prevention in diabetes (synthetic)",
         nct="NCT90000015", size=1419, age=("mean_sd", 59.6, 4.9), facets=FACETS,
         extra=["Weight", "LDL cholesterol", "HDL cholesterol", "Triglycerides",
                "Total cholesterol"],
         cats=["Male", "African American", "Current smoker", "Hypertension",
               "Aspirin"],
         drugs=["Atorvastatin"], subset="male_aa"),
    dict(id="MetforminPrediabetesYouth",
         title="Metformin in young adults with prediabetes (synthetic)",
         nct="NCT90000016", size=268, age=("mean_sd", 44.8, 8.3), facets=FACETS,
         glucose_unit="mmol/L",
         extra=["Weight", "Waist circumference", "Triglycerides", "HDL cholesterol"],
         cats=["Male", "African American", "Hispanic", "Asian", "Current smoker",
               "Hypertension"],
         drugs=["Metformin"], subset="male_aa"),
    dict(id="AspirinPrimaryPrevention",
         title="Low-dose aspirin for primary prevention in diabetes (synthetic)",
         nct="NCT90000017", size=7640, age=("mean_sd", 63.3, 9.2), facets=FACETS,
         extra=["Weight", "Diabetes duration", "LDL cholesterol"],
         cats=["Male", "African American", "Current smoker", "Hypertension",
               "Statin", "Insulin", "Peripheral artery disease"],
         drugs=["Aspirin"], subset="none", drug_rows_replace_cats=True),
    dict(id="BiguanideDoseRanging",
         title="Biguanide dose ranging in early type 2 diabetes (synthetic)",
         nct="NCT90000018", size=412, age=("median_iqr", 54.0, 47.0, 62.0), facets=FACETS,
         extra=["Weight", "Diabetes duration", "Triglycerides", "Creatinine"],
         cats=["Male", "African American", "Hispanic", "Hypertension"],
         drugs=["Biguanide"], subset="male_aa",
         description="Three-step dose titration over 12 weeks"),
    dict(id="IntensiveGlycemia",
         title="Intensive versus standard glycemic targets (synthetic)",
         nct="NCT90000019", size=10251, age=("mean_sd", 62.2, 6.8), facets=FACETS,
         extra=["Weight", "Diabetes duration", "LDL cholesterol", "HDL cholesterol", "eGFR"],
         cats=["Male", "African American", "Hispanic", "Current smoker",
               "Hypertension", "Prior myocardial infarction", "Statin",
               "Aspirin"],
         drugs=["Insulin"], subset="female_aa", drug_rows_replace_cats=True),
    dict(id="RetinopathyFenofibrate",
         title="Lipid lowering and diabetic retinopathy progression (synthetic)",
         nct="NCT90000020", size=1593, age=("mean_sd", 57.2, 5.9), facets=FACETS,
         extra=["Weight", "Diabetes duration", "Triglycerides", "HDL cholesterol",
                "Total cholesterol"],
         cats=["Male", "African American", "Asian", "Hypertension",
               "Diabetic retinopathy", "Statin"],
         drugs=["Statin"], subset="male_aa", drug_rows_replace_cats=True),
]


def age_row(spec):
    kind = spec[0]
    if kind == "mean_sd":
        return characteristic("Age", mean_sd(spec[1], spec[2], "year"))
    return characteristic("Age", median_iqr(spec[1], spec[2], spec[3], "year"))


def continuous_rows(study):
    rows = []
    for label in study["facets"] + study["extra"]:
        unit = study.get("glucose_unit") if label == "Fasting glucose" else None
        rows.append(characteristic(label, draw_continuous(label, unit)))
    return rows


def categorical_rows(study):
    rows = []
    drugs = set(study["drugs"])
    for label in study["cats"]:
        if study.get("drug_rows_replace_cats") and label in drugs:
            continue
        rows.append(characteristic(label, draw_percentage(label)))
    return rows


def drug_rows(study):
    return [characteristic(d, pct(100.0), "property") for d in study["drugs"]]


def subsets(kind, share):
    pairs = {
        "male_aa": [("Sex", "Male"), ("Race", "African American")],
        "male_aa_low": [("Sex", "Male"), ("Race", "African American")],
        "female_aa": [("Sex", "Female"), ("Race", "African American")],
        "male_white": [("Sex", "Male"), ("Race", "White")],
    }
    if kind == "none":
        return []
    names = {"male_aa": "MaleAfricanAmerican", "male_aa_low": "MaleAfricanAmerican",
             "female_aa": "FemaleAfricanAmerican", "male_white": "MaleWhite"}
    return [{"subset_id": names[kind],
             "defined_by": [{"label": c, "value": v} for c, v in pairs[kind]],
             "percentage": share}]


def build(study):
    doc = {"study_id": study["id"], "title": study["title"],
           "registry_link": f"https://clinicaltrials.gov/ct2/show/{study['nct']}"}
    if study["id"] == "TelmisartanRamipril":
        shared = continuous_rows(study) + categorical_rows(study)
        arms = []
        for arm_id, iri, kind, size, age, drug, share in [
                ("Ramipril", "sco-i:RamiprilArm", "intervention", 8576, (66.4, 7.2), "Ramipril",
                 1.2),
                ("Placebo", None, "control", 8502, (66.6, 7.1), "Placebo", 1.1)]:
            arm = {"arm_id": arm_id, "kind": kind, "population_size": size}
            if iri:
                arm["iri"] = iri
            arm["characteristics"] = ([characteristic("Age", mean_sd(age[0], age[1], "year"))]
                                      + shared
                                      + [characteristic(drug, pct(100.0), "property")])
            arm["subsets"] = subsets(study["subset"], share)
            arms.append(arm)
        # Each arm lists its own assigned intervention; the sets differ on
        # purpose, which surfaces the shared-characteristics warning.
        doc["arms"] = arms
        return doc
    share = r1(rng.uniform(3.0, 14.0))
    arm = {"arm_id": "Main", "kind": "intervention", "population_size": study["size"]}
    if "description" in study:
        arm["description"] = study["description"]
    arm["characteristics"] = ([age_row(study["age"])] + continuous_rows(study)
                              + categorical_rows(study) + drug_rows(study))
    arm["subsets"] = subsets(study["subset"], share)
    doc["arms"] = [arm]
    return doc


def upper_bound(age):
    if age[0] == "mean_sd":
        return age[1] + 2 * age[2]
    return age[3]


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/fixture_corpus")
    out.mkdir(parents=True, exist_ok=True)
    for old in out.glob("*.json"):
        old.unlink()
    docs = [build(s) for s in STUDIES]
    characteristics = 0
    nodes = 0
    arms = 0
    subset_count = 0
    for doc in docs:
        labels = set()
        for arm in doc["arms"]:
            arms += 1
            nodes += len(arm["characteristics"])
            subset_count += len(arm["subsets"])
            labels.update(c["label"] for c in arm["characteristics"])
        characteristics += len(labels)
        (out / f"{doc['study_id']}.json").write_text(json.dumps(doc, indent=2) + "\n")

    male_aa = sum(1 for s in STUDIES if s["subset"] in ("male_aa", "male_aa_low"))
    young_arms = sum(1 for s in STUDIES if "age" in s and upper_bound(s["age"]) < 70)
    manifest = {
        "studies": len(docs),
        "arms": arms,
        "characteristics": characteristics,
        "characteristic_nodes": nodes,
        "subsets": subset_count,
        "expected": {
            "match_male_african_american": {"numerator": male_aa, "denominator": len(docs)},
            "limitation_age_upper_bound_below_70": {"numerator": young_arms,
                                                    "denominator": arms},
            "quality_guanidines_1000_one_third": {"numerator": 1, "denominator": len(docs)},
        },
    }
    out.with_name(out.name + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(json.dumps(manifest))


if __name__ == "__main__":
    main()
