"""Deterministic synthetic data shaped like virtual-healthcare usage logs.

Real triage data is unavailable by design, so demos, tests, and acceptance
runs use four generated CSV sources: per-call Encounters, half-hourly
IntervalOps aggregates, post-call Survey responses, and physician CallBack
notes. Identical (seed, months, scale) always yields byte-identical output.

Planted structure the analytics layer should recover:
  - physician disposition downgrades a nurse Yellow to Green with
    probability 0.30 (the signature triage flow),
  - the CallBack physician disposition column mixes encodings
    ("Red"/"HIGH"/"red") and needs interactive cleaning,
  - video users skew slightly more satisfied in the Survey Likerts.
"""

from __future__ import annotations

import calendar
import csv
import io
import random
from dataclasses import dataclass
from datetime import datetime, timedelta

from .errors import InvalidSpec

START_YEAR = 2020
START_MONTH = 4  # matches the usage window the source data covers

MONTHLY_ROWS = {"Encounters": 4000, "IntervalOps": 3000, "Survey": 200, "CallBack": 500}

DATASET_ORDER = ("Encounters", "IntervalOps", "Survey", "CallBack")

DISPOSITIONS = ("Red", "Yellow", "Green", "TryHomeTreatment")

LIKERT = ("1", "2", "3", "4", "5")


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    months: int = 12
    scale: float = 1.0

    def validate(self) -> None:
        if self.months < 1:
            raise InvalidSpec("months must be >= 1")
        if not self.scale > 0:
            raise InvalidSpec("scale must be > 0")


@dataclass
class SynthBundle:
    csvs: dict  # dataset name -> bytes
    schema_cfg: str
    merges_cfg: str
    concerns_cfg: str
    colors_cfg: str
    orderings_cfg: str

    def write_to(self, out_dir) -> list:
        """Write CSVs and config files into a directory; returns paths written."""
        from pathlib import Path

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in DATASET_ORDER:
            path = out / f"{name}.csv"
            path.write_bytes(self.csvs[name])
            written.append(path)
        for filename, text in (
            ("schema.cfg", self.schema_cfg),
            ("merges.cfg", self.merges_cfg),
            ("concerns.cfg", self.concerns_cfg),
            ("colors.cfg", self.colors_cfg),
            ("orderings.cfg", self.orderings_cfg),
        ):
            path = out / filename
            path.write_text(text, encoding="utf-8")
            written.append(path)
        return written


def generate(spec: GeneratorSpec) -> SynthBundle:
    spec.validate()
    rng = random.Random(spec.seed)
    csvs = {
        "Encounters": _encounters(rng, spec),
        "IntervalOps": _interval_ops(rng, spec),
        "Survey": _survey(rng, spec),
        "CallBack": _callback(rng, spec),
    }
    return SynthBundle(
        csvs=csvs,
        schema_cfg=SCHEMA_CFG,
        merges_cfg=MERGES_CFG,
        concerns_cfg=CONCERNS_CFG,
        colors_cfg=COLORS_CFG,
        orderings_cfg=ORDERINGS_CFG,
    )


# ---------------------------------------------------------------------------
# row machinery
# ---------------------------------------------------------------------------


def _months(spec: GeneratorSpec):
    for index in range(spec.months):
        month_index = START_MONTH - 1 + index
        yield START_YEAR + month_index // 12, month_index % 12 + 1


def _rows_for(spec: GeneratorSpec, dataset: str) -> int:
    return round(MONTHLY_ROWS[dataset] * spec.scale)


def _timestamps(rng: random.Random, year: int, month: int, count: int) -> list:
    days = calendar.monthrange(year, month)[1]
    first = datetime(year, month, 1)
    stamps = sorted(
        first + timedelta(days=rng.randrange(days), seconds=rng.randrange(86400))
        for _ in range(count)
    )
    return [s.strftime("%Y-%m-%d %H:%M:%S") for s in stamps]


def _pick(rng: random.Random, table: list, count: int) -> list:
    population = [value for value, _ in table]
    weights = [weight for _, weight in table]
    return rng.choices(population, weights=weights, k=count)


def _csv_bytes(header: list, rows: list) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# Encounters: 22 categorical, 3 quantitative, 1 datetime
# ---------------------------------------------------------------------------

AGE_RANGES = [("0-19", 8), ("20-39", 24), ("40-59", 30), ("60-69", 16), ("70-79", 12), ("80+", 7), ("", 3)]
GENDERS = [("Female", 54), ("Male", 41), ("Unknown", 3), ("", 2)]
AUTHORITIES = [("Fraser", 30), ("Vancouver Coastal", 24), ("Vancouver Island", 18), ("Interior", 16), ("Northern", 12)]
PROBLEMS = [
    ("Respiratory", 22),
    ("Gastrointestinal", 17),
    ("Dermatology", 13),
    ("Neurology", 12),
    ("Musculoskeletal", 12),
    ("Cardiology", 9),
    ("Other", 15),
]

KB_DISPOSITION = [("Red", 18), ("Yellow", 40), ("Green", 28), ("TryHomeTreatment", 10), ("", 4)]

# nurse judgement given handbook guidance
RN_GIVEN_KB = {
    "Red": [("Red", 55), ("Yellow", 30), ("Green", 10), ("TryHomeTreatment", 4), ("", 1)],
    "Yellow": [("Yellow", 60), ("Green", 22), ("Red", 10), ("TryHomeTreatment", 6), ("", 2)],
    "Green": [("Green", 62), ("TryHomeTreatment", 18), ("Yellow", 14), ("Red", 4), ("", 2)],
    "TryHomeTreatment": [("TryHomeTreatment", 55), ("Green", 30), ("Yellow", 12), ("Red", 2), ("", 1)],
    "": [("", 40), ("Yellow", 25), ("Green", 20), ("Red", 10), ("TryHomeTreatment", 5)],
}

# physician judgement given nurse judgement; Yellow->Green is pinned at 0.30
MD_GIVEN_RN = {
    "Red": [("Red", 70), ("Yellow", 20), ("Green", 5), ("TryHomeTreatment", 3), ("", 2)],
    "Yellow": [("Green", 30), ("Yellow", 55), ("Red", 5), ("TryHomeTreatment", 7), ("", 3)],
    "Green": [("Green", 75), ("TryHomeTreatment", 15), ("Yellow", 7), ("Red", 2), ("", 1)],
    "TryHomeTreatment": [("TryHomeTreatment", 60), ("Green", 30), ("Yellow", 8), ("Red", 2)],
    "": [("", 50), ("Green", 20), ("Yellow", 20), ("Red", 10)],
}

ENCOUNTER_SIMPLE = [
    ("PrimaryDoctorAttached", [("Yes", 62), ("No", 36), ("", 2)]),
    ("CommunicationMethod", [("Phone", 70), ("Video", 30)]),
    ("CallOutcome", [("Completed", 90), ("Transferred", 6), ("Abandoned", 4)]),
    ("ReferralSource", [("811", 58), ("Web", 22), ("Clinic", 12), ("Other", 8)]),
    ("LanguagePreference", [("English", 74), ("Punjabi", 8), ("Mandarin", 7), ("Cantonese", 5), ("French", 3), ("Other", 3)]),
    ("InterpreterUsed", [("No", 91), ("Yes", 9)]),
    ("CovidRelated", [("No", 68), ("Yes", 32)]),
    ("SymptomDuration", [("<1 day", 30), ("1-3 days", 34), ("4-7 days", 20), (">7 days", 16)]),
    ("PreviousCaller", [("No", 77), ("Yes", 23)]),
    ("CallShift", [("Day", 46), ("Evening", 38), ("Night", 16)]),
    ("PhysicianSpecialty", [("Emergency", 52), ("Family", 38), ("Internal", 10)]),
    ("FollowUpPlanned", [("No", 64), ("Yes", 36)]),
    ("CallbackConsent", [("Yes", 71), ("No", 29)]),
    ("UrbanRural", [("Urban", 64), ("Rural", 28), ("Remote", 8)]),
    ("EncounterComplexity", [("Medium", 48), ("Low", 34), ("High", 18)]),
]

ENCOUNTER_HEADER = (
    ["CallStart", "Client_Age_Range", "Gender", "HealthAuthority", "NursingProblemCategory",
     "KBDisposition", "RNDisposition", "MDDisposition"]
    + [name for name, _ in ENCOUNTER_SIMPLE]
    + ["WaitMinutes", "CallDurationSeconds", "PhysicianMinutes"]
)


def _encounters(rng: random.Random, spec: GeneratorSpec) -> bytes:
    rows = []
    for year, month in _months(spec):
        count = _rows_for(spec, "Encounters")
        stamps = _timestamps(rng, year, month, count)
        ages = _pick(rng, AGE_RANGES, count)
        genders = _pick(rng, GENDERS, count)
        authorities = _pick(rng, AUTHORITIES, count)
        problems = _pick(rng, PROBLEMS, count)
        kb = _pick(rng, KB_DISPOSITION, count)
        rn = [_pick(rng, RN_GIVEN_KB[k], 1)[0] for k in kb]
        md = [_pick(rng, MD_GIVEN_RN[r], 1)[0] for r in rn]
        simple = [_pick(rng, table, count) for _, table in ENCOUNTER_SIMPLE]
        for i in range(count):
            wait = round(rng.gammavariate(2.0, 9.0), 1)
            duration = rng.randrange(120, 1800)
            physician = round(rng.gammavariate(2.0, 6.0), 1)
            rows.append(
                [stamps[i], ages[i], genders[i], authorities[i], problems[i], kb[i], rn[i], md[i]]
                + [column[i] for column in simple]
                + [wait, duration, physician]
            )
    return _csv_bytes(ENCOUNTER_HEADER, rows)


# ---------------------------------------------------------------------------
# IntervalOps: 18 quantitative, 1 datetime
# ---------------------------------------------------------------------------

INTERVAL_HEADER = [
    "IntervalStart",
    "TotalCalls", "AnsweredCalls", "AbandonedCalls", "ReferredToRN", "ReferredToMD",
    "AvgWaitSeconds", "MaxWaitSeconds", "AvgHandleSeconds", "MaxHandleSeconds",
    "AvgSpeedAnswerSeconds", "StaffedNurses", "StaffedPhysicians", "CallbacksQueued",
    "VideoCalls", "PhoneCalls", "OccupancyPercent", "AbandonRatePercent", "ServiceLevelPercent",
]


def _interval_ops(rng: random.Random, spec: GeneratorSpec) -> bytes:
    rows = []
    for year, month in _months(spec):
        count = _rows_for(spec, "IntervalOps")
        stamps = _timestamps(rng, year, month, count)
        for stamp in stamps:
            total = rng.randrange(20, 140)
            answered = rng.randrange(int(total * 0.8), total + 1)
            abandoned = total - answered
            to_rn = rng.randrange(int(answered * 0.5), answered + 1)
            to_md = rng.randrange(0, max(1, int(to_rn * 0.15)))
            avg_wait = round(rng.uniform(30, 600), 1)
            avg_handle = round(rng.uniform(180, 900), 1)
            video = rng.randrange(0, max(1, int(answered * 0.35)))
            # a sliver of blank cells keeps the missing-numeric path honest
            occupancy = "" if rng.random() < 0.002 else round(rng.uniform(35, 98), 1)
            rows.append([
                stamp,
                total, answered, abandoned, to_rn, to_md,
                avg_wait, round(avg_wait * rng.uniform(1.5, 3.0), 1),
                avg_handle, round(avg_handle * rng.uniform(1.3, 2.4), 1),
                round(rng.uniform(10, 240), 1),
                rng.randrange(4, 26), rng.randrange(1, 7), rng.randrange(0, 12),
                video, answered - video,
                occupancy,
                round(100.0 * abandoned / total, 2),
                round(rng.uniform(55, 99), 1),
            ])
    return _csv_bytes(INTERVAL_HEADER, rows)


# ---------------------------------------------------------------------------
# Survey: 12 categorical, 8 ordered, 4 quantitative, 1 datetime
# ---------------------------------------------------------------------------

LIKERT_BY_VIDEO = {
    # video users skew happier; recoverable by stratifying scores by UsedVideo
    "Yes": [("5", 44), ("4", 30), ("3", 14), ("2", 7), ("1", 3), ("", 2)],
    "Y": [("5", 44), ("4", 30), ("3", 14), ("2", 7), ("1", 3), ("", 2)],
    "No": [("5", 30), ("4", 30), ("3", 20), ("2", 12), ("1", 6), ("", 2)],
}

SURVEY_CATEGORICAL = [
    ("WouldUseAgain", [("Yes", 78), ("No", 14), ("Unsure", 8)]),
    ("ReachedERInstead", [("No", 82), ("Yes", 18)]),
    ("HealthAuthority", AUTHORITIES),
    ("Gender", GENDERS),
    ("AgeRange", AGE_RANGES),
    ("HeardAbout", [("811", 46), ("Friend", 20), ("Web", 18), ("Clinic", 10), ("Other", 6)]),
    ("PreferredModality", [("Phone", 52), ("Video", 36), ("Either", 12)]),
    ("ResolvedConcern", [("Yes", 70), ("Partially", 20), ("No", 10)]),
    ("ContactedGP", [("No", 58), ("Yes", 42)]),
    ("EnglishFirstLanguage", [("Yes", 72), ("No", 28)]),
    ("DeviceType", [("Mobile", 55), ("Desktop", 30), ("Tablet", 15)]),
]

SURVEY_LIKERTS = [
    "SatisfactionOverall", "PhysicianListened", "PhysicianKind", "ConsultEasy",
    "WaitAcceptable", "AdviceClear", "TrustInAdvice", "LikelyRecommend",
]

SURVEY_HEADER = (
    ["SurveyDateTime", "UsedVideo"]
    + [name for name, _ in SURVEY_CATEGORICAL]
    + SURVEY_LIKERTS
    + ["MinutesToJoin", "SurveyMinutes", "HouseholdSize", "PriorCallsCount"]
)


def _survey(rng: random.Random, spec: GeneratorSpec) -> bytes:
    rows = []
    for year, month in _months(spec):
        count = _rows_for(spec, "Survey")
        stamps = _timestamps(rng, year, month, count)
        used_video = _pick(rng, [("Yes", 24), ("Y", 8), ("No", 68)], count)
        categoricals = [_pick(rng, table, count) for _, table in SURVEY_CATEGORICAL]
        for i in range(count):
            likerts = [_pick(rng, LIKERT_BY_VIDEO[used_video[i]], 1)[0] for _ in SURVEY_LIKERTS]
            rows.append(
                [stamps[i], used_video[i]]
                + [column[i] for column in categoricals]
                + likerts
                + [
                    round(rng.uniform(0.5, 12.0), 1),
                    round(rng.uniform(1.0, 8.0), 1),
                    rng.randrange(1, 7),
                    rng.randrange(0, 5),
                ]
            )
    return _csv_bytes(SURVEY_HEADER, rows)


# ---------------------------------------------------------------------------
# CallBack: 7 categorical, 1 ordered, 2 quantitative, 1 datetime
# ---------------------------------------------------------------------------

# transcribed by hand from written notes: same semantics under many encodings
VP_DISPOSITION_NOISY = [
    ("Red", 10), ("red", 4), ("HIGH", 4),
    ("Yellow", 22), ("yellow", 8), ("MODERATE", 6),
    ("Green", 24), ("green", 6), ("LOW", 5),
    ("TryHomeTreatment", 6), ("Try Home Treatment", 3),
    ("", 2),
]

CALLBACK_CATEGORICAL = [
    ("RNDisposition1", [("Yellow", 38), ("Green", 30), ("Red", 18), ("TryHomeTreatment", 10), ("", 4)]),
    ("AdviceFollowed", [("Yes", 58), ("Partially", 24), ("No", 18)]),
    ("SoughtCare", [("None", 48), ("Clinic", 32), ("ER", 20)]),
    ("ConditionChange", [("Improved", 56), ("Same", 32), ("Worse", 12)]),
    ("ReachedPerson", [("Yes", 84), ("No", 16)]),
    ("Transcriber", [("KS", 42), ("HL", 33), ("EC", 25)]),
]

CALLBACK_HEADER = (
    ["CallbackDateTime", "VPDisposition"]
    + [name for name, _ in CALLBACK_CATEGORICAL]
    + ["RecoveryConfidence", "DaysSinceCall", "CallbackDurationSeconds"]
)


def _callback(rng: random.Random, spec: GeneratorSpec) -> bytes:
    rows = []
    for year, month in _months(spec):
        count = _rows_for(spec, "CallBack")
        stamps = _timestamps(rng, year, month, count)
        vp = _pick(rng, VP_DISPOSITION_NOISY, count)
        categoricals = [_pick(rng, table, count) for _, table in CALLBACK_CATEGORICAL]
        confidences = _pick(rng, [("4", 30), ("5", 26), ("3", 24), ("2", 12), ("1", 6), ("", 2)], count)
        for i in range(count):
            rows.append(
                [stamps[i], vp[i]]
                + [column[i] for column in categoricals]
                + [confidences[i], rng.randrange(1, 5), rng.randrange(60, 900)]
            )
    return _csv_bytes(CALLBACK_HEADER, rows)


# ---------------------------------------------------------------------------
# matching configuration
# ---------------------------------------------------------------------------


def _schema_lines() -> str:
    lines = ["# column typing for the synthetic datasets"]
    lines.append("Encounters.CallStart = datetime time")
    for name in ENCOUNTER_HEADER[1:-3]:
        lines.append(f"Encounters.{name} = categorical")
    lines.append("Encounters.WaitMinutes = quantitative units=minutes")
    lines.append("Encounters.CallDurationSeconds = quantitative units=seconds")
    lines.append("Encounters.PhysicianMinutes = quantitative units=minutes")

    lines.append("IntervalOps.IntervalStart = datetime time")
    units = {
        "AvgWaitSeconds": "seconds", "MaxWaitSeconds": "seconds", "AvgHandleSeconds": "seconds",
        "MaxHandleSeconds": "seconds", "AvgSpeedAnswerSeconds": "seconds",
    }
    for name in INTERVAL_HEADER[1:]:
        if name.endswith("Percent"):
            lines.append(f"IntervalOps.{name} = percent")
        else:
            lines.append(f"IntervalOps.{name} = quantitative units={units.get(name, 'count')}")

    lines.append("Survey.SurveyDateTime = datetime time")
    lines.append("Survey.UsedVideo = categorical")
    for name, _ in SURVEY_CATEGORICAL:
        lines.append(f"Survey.{name} = categorical")
    for name in SURVEY_LIKERTS:
        lines.append(f"Survey.{name} = ordered")
    lines.append("Survey.MinutesToJoin = quantitative units=minutes")
    lines.append("Survey.SurveyMinutes = quantitative units=minutes")
    lines.append("Survey.HouseholdSize = quantitative units=count")
    lines.append("Survey.PriorCallsCount = quantitative units=count")

    lines.append("CallBack.CallbackDateTime = datetime time")
    lines.append("CallBack.VPDisposition = categorical")
    for name, _ in CALLBACK_CATEGORICAL:
        lines.append(f"CallBack.{name} = categorical")
    lines.append("CallBack.RecoveryConfidence = ordered")
    lines.append("CallBack.DaysSinceCall = quantitative units=days")
    lines.append("CallBack.CallbackDurationSeconds = quantitative units=seconds")
    return "\n".join(lines) + "\n"


SCHEMA_CFG = _schema_lines()

MERGES_CFG = """# merges everyone agrees on, applied at ingestion
Survey.UsedVideo: Y,Yes -> Yes
"""

CONCERNS_CFG = """# curated starting points, one per analysis theme
Patient Satisfaction: Survey.SatisfactionOverall, Survey.PhysicianListened, Survey.PhysicianKind, Survey.ConsultEasy, Survey.AdviceClear, Survey.TrustInAdvice, Survey.LikelyRecommend, Survey.UsedVideo
Call Volumes: IntervalOps.TotalCalls, IntervalOps.AnsweredCalls, IntervalOps.AbandonedCalls, IntervalOps.AbandonRatePercent, IntervalOps.VideoCalls, IntervalOps.PhoneCalls
Patient Journey: Encounters.KBDisposition, Encounters.RNDisposition, Encounters.MDDisposition, Encounters.FollowUpPlanned
Demographics: Encounters.Client_Age_Range, Encounters.Gender, Encounters.HealthAuthority, Encounters.UrbanRural, Encounters.LanguagePreference
Staffing: IntervalOps.StaffedNurses, IntervalOps.StaffedPhysicians, IntervalOps.OccupancyPercent, IntervalOps.ServiceLevelPercent
Problem Mix: Encounters.NursingProblemCategory, Encounters.CovidRelated, Encounters.SymptomDuration, Encounters.EncounterComplexity
Callback Follow-up: CallBack.VPDisposition, CallBack.RNDisposition1, CallBack.AdviceFollowed, CallBack.SoughtCare, CallBack.ConditionChange, CallBack.RecoveryConfidence
Modality: Encounters.CommunicationMethod, Survey.UsedVideo, Survey.PreferredModality, Survey.DeviceType, IntervalOps.VideoCalls
Wait Times: Encounters.WaitMinutes, IntervalOps.AvgWaitSeconds, IntervalOps.MaxWaitSeconds, IntervalOps.AvgSpeedAnswerSeconds
Attachment: Encounters.PrimaryDoctorAttached, Survey.ContactedGP, CallBack.SoughtCare
"""

COLORS_CFG = """# triage palette; level names carry their color, keep marks matching
Encounters.KBDisposition.TryHomeTreatment = #2CA02C
Encounters.RNDisposition.TryHomeTreatment = #2CA02C
Encounters.MDDisposition.TryHomeTreatment = #2CA02C
CallBack.RNDisposition1.TryHomeTreatment = #2CA02C
Encounters.KBDisposition.NULL = #B0B0B0
Encounters.RNDisposition.NULL = #B0B0B0
Encounters.MDDisposition.NULL = #B0B0B0
"""

ORDERINGS_CFG = """# natural reading order for binned and graded levels
Encounters.Client_Age_Range: 0-19, 20-39, 40-59, 60-69, 70-79, 80+, NULL
Encounters.SymptomDuration: <1 day, 1-3 days, 4-7 days, >7 days
Encounters.EncounterComplexity: Low, Medium, High
Survey.AgeRange: 0-19, 20-39, 40-59, 60-69, 70-79, 80+, NULL
"""
