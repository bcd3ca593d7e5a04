"""Controlled vocabularies: products and their legacy aliases, coupled
CAD/CAE/FEM tools, material families, research fields, and usage contexts.

Annotation values entered by curators are resolved against these tables;
everything downstream (store, analytics, exports) only ever sees canonical
members.
"""

from __future__ import annotations

import enum

from .textutil import slugify


class Product(enum.Enum):
    EDUPACK = "EduPack"
    SELECTOR = "Selector"
    MI = "MI"


# Legacy and informal product names seen in older literature. Keys are
# slugified; resolve_product() slugifies its input before lookup.
PRODUCT_ALIASES = {
    "edupack": Product.EDUPACK,
    "granta_edupack": Product.EDUPACK,
    "ces_edupack": Product.EDUPACK,
    "granta_ces_edupack": Product.EDUPACK,
    "cambridge_engineering_selector_edupack": Product.EDUPACK,
    "selector": Product.SELECTOR,
    "granta_selector": Product.SELECTOR,
    "ces_selector": Product.SELECTOR,
    "granta_ces_selector": Product.SELECTOR,
    "ces": Product.SELECTOR,
    "granta_ces": Product.SELECTOR,
    "cambridge_engineering_selector": Product.SELECTOR,
    "mi": Product.MI,
    "granta_mi": Product.MI,
    "mi_enterprise": Product.MI,
    "granta_mi_enterprise": Product.MI,
}


def resolve_product(name: str) -> Product | None:
    """Map a raw product label (canonical or legacy alias) to its product."""
    return PRODUCT_ALIASES.get(slugify(name))


class UsageContext(enum.Enum):
    ACADEMIC_RESEARCH = "AcademicResearch"
    EDUCATION = "Education"
    BENCHMARKING = "Benchmarking"
    COMPETITIVE_ANALYSIS = "CompetitiveAnalysis"


class ResearchSegment(enum.Enum):
    ACADEMIA = "Academia"
    INDUSTRIAL = "Industrial"
    EDUCATION = "Education"


class ScopeDepth(enum.Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class MaterialFamily(enum.Enum):
    METALS_AND_ALLOYS = "MetalsAndAlloys"
    POLYMERS = "Polymers"
    CERAMICS_AND_GLASSES = "CeramicsAndGlasses"
    COMPOSITES = "Composites"
    NATURAL_MATERIALS = "NaturalMaterials"
    FOAMS = "Foams"
    GENERIC = "Generic"


# Canonical coupled-tool vocabulary. "Other" aggregates anything outside it.
COUPLED_TOOLS = (
    "AnsysMechanical",
    "AnsysWorkbench",
    "AnsysFluent",
    "Abaqus",
    "Comsol",
    "Marc",
    "Nastran",
    "SolidWorks",
    "Catia",
    "Creo",
    "AutodeskInventor",
    "Matlab",
    "Other",
)

_COUPLED_TOOL_ALIASES = {
    "ansys_mechanical": "AnsysMechanical",
    "ansys": "AnsysMechanical",
    "ansys_workbench": "AnsysWorkbench",
    "workbench": "AnsysWorkbench",
    "ansys_fluent": "AnsysFluent",
    "fluent": "AnsysFluent",
    "abaqus": "Abaqus",
    "comsol": "Comsol",
    "comsol_multiphysics": "Comsol",
    "marc": "Marc",
    "msc_marc": "Marc",
    "nastran": "Nastran",
    "msc_nastran": "Nastran",
    "solidworks": "SolidWorks",
    "solid_works": "SolidWorks",
    "catia": "Catia",
    "creo": "Creo",
    "ptc_creo": "Creo",
    "pro_engineer": "Creo",
    "autodesk_inventor": "AutodeskInventor",
    "inventor": "AutodeskInventor",
    "matlab": "Matlab",
    "other": "Other",
}
for _name in COUPLED_TOOLS:
    _COUPLED_TOOL_ALIASES.setdefault(slugify(_name), _name)


def resolve_coupled_tool(label: str) -> tuple[str, str | None]:
    """Resolve a raw coupled-tool label.

    Returns ``(canonical_name, raw_label_or_None)``; the raw label is kept
    only when the name fell outside the vocabulary and was folded to Other.
    """
    canonical = _COUPLED_TOOL_ALIASES.get(slugify(label))
    if canonical is not None:
        return canonical, None
    return "Other", label


class FosField(enum.Enum):
    """OECD Fields of Science and Technology (2007), second-order categories."""

    # 1. Natural sciences
    MATHEMATICS = "Mathematics"
    COMPUTER_AND_INFORMATION_SCIENCES = "ComputerAndInformationSciences"
    PHYSICAL_SCIENCES = "PhysicalSciences"
    CHEMICAL_SCIENCES = "ChemicalSciences"
    EARTH_AND_RELATED_ENVIRONMENTAL_SCIENCES = "EarthAndRelatedEnvironmentalSciences"
    BIOLOGICAL_SCIENCES = "BiologicalSciences"
    OTHER_NATURAL_SCIENCES = "OtherNaturalSciences"
    # 2. Engineering and technology
    CIVIL_ENGINEERING = "CivilEngineering"
    ELECTRICAL_ELECTRONIC_INFORMATION_ENGINEERING = "ElectricalElectronicInformationEngineering"
    MECHANICAL_ENGINEERING = "MechanicalEngineering"
    CHEMICAL_ENGINEERING = "ChemicalEngineering"
    MATERIALS_ENGINEERING = "MaterialsEngineering"
    MEDICAL_ENGINEERING = "MedicalEngineering"
    ENVIRONMENTAL_ENGINEERING = "EnvironmentalEngineering"
    ENVIRONMENTAL_BIOTECHNOLOGY = "EnvironmentalBiotechnology"
    INDUSTRIAL_BIOTECHNOLOGY = "IndustrialBiotechnology"
    NANO_TECHNOLOGY = "NanoTechnology"
    OTHER_ENGINEERING_AND_TECHNOLOGIES = "OtherEngineeringAndTechnologies"
    # 3. Medical and health sciences
    BASIC_MEDICINE = "BasicMedicine"
    CLINICAL_MEDICINE = "ClinicalMedicine"
    HEALTH_SCIENCES = "HealthSciences"
    HEALTH_BIOTECHNOLOGY = "HealthBiotechnology"
    OTHER_MEDICAL_SCIENCES = "OtherMedicalSciences"
    # 4. Agricultural sciences
    AGRICULTURE_FORESTRY_FISHERIES = "AgricultureForestryFisheries"
    ANIMAL_AND_DAIRY_SCIENCE = "AnimalAndDairyScience"
    VETERINARY_SCIENCE = "VeterinaryScience"
    AGRICULTURAL_BIOTECHNOLOGY = "AgriculturalBiotechnology"
    OTHER_AGRICULTURAL_SCIENCES = "OtherAgriculturalSciences"
    # 5. Social sciences
    PSYCHOLOGY = "Psychology"
    ECONOMICS_AND_BUSINESS = "EconomicsAndBusiness"
    EDUCATIONAL_SCIENCES = "EducationalSciences"
    SOCIOLOGY = "Sociology"
    LAW = "Law"
    POLITICAL_SCIENCE = "PoliticalScience"
    SOCIAL_AND_ECONOMIC_GEOGRAPHY = "SocialAndEconomicGeography"
    MEDIA_AND_COMMUNICATIONS = "MediaAndCommunications"
    OTHER_SOCIAL_SCIENCES = "OtherSocialSciences"
    # 6. Humanities
    HISTORY_AND_ARCHAEOLOGY = "HistoryAndArchaeology"
    LANGUAGES_AND_LITERATURE = "LanguagesAndLiterature"
    PHILOSOPHY_ETHICS_AND_RELIGION = "PhilosophyEthicsAndReligion"
    ARTS = "Arts"
    OTHER_HUMANITIES = "OtherHumanities"


# Country normalization for affiliation strings. Far from exhaustive; it
# covers the spellings that actually occur in engineering affiliations.
COUNTRY_ALIASES = {
    "usa": "United States",
    "united_states": "United States",
    "united_states_of_america": "United States",
    "us": "United States",
    "uk": "United Kingdom",
    "united_kingdom": "United Kingdom",
    "great_britain": "United Kingdom",
    "england": "United Kingdom",
    "scotland": "United Kingdom",
    "wales": "United Kingdom",
}
for _country in (
    "Australia", "Austria", "Belgium", "Brazil", "Canada", "Chile", "China",
    "Colombia", "Czech Republic", "Denmark", "Ecuador", "Egypt", "Finland",
    "France", "Germany", "Greece", "Hungary", "India", "Indonesia", "Iran",
    "Ireland", "Israel", "Italy", "Japan", "Malaysia", "Mexico", "Morocco",
    "Netherlands", "New Zealand", "Norway", "Pakistan", "Poland", "Portugal",
    "Romania", "Russia", "Saudi Arabia", "Singapore", "Slovenia",
    "South Africa", "South Korea", "Spain", "Sweden", "Switzerland",
    "Taiwan", "Thailand", "Turkey", "Ukraine", "United Arab Emirates",
    "Vietnam",
):
    COUNTRY_ALIASES[slugify(_country)] = _country


def resolve_country(label: str) -> str | None:
    return COUNTRY_ALIASES.get(slugify(label))
