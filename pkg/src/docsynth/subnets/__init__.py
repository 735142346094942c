"""Per-element generative subnetworks producing complete document plans."""

from docsynth.subnets.catalog import (
    BODY_CATEGORIES,
    NODE_CATALOG,
    build_registry,
    catalog_position,
)
from docsynth.subnets.plans import (
    BulletPlan,
    CaptionPlan,
    CellPlan,
    ChartSubplot,
    DefectOp,
    DefectPlan,
    DocumentPlan,
    EquationGroup,
    EquationPlan,
    FigurePlan,
    HeaderColumn,
    HeaderPlan,
    PageGeometry,
    ParagraphPlan,
    SectionPlan,
    TablePlan,
    TextStyle,
    TitlePlan,
    load_plan,
    plan_from_dict,
    plan_to_dict,
    save_plan,
)
from docsynth.subnets.sampler import (
    sample_document_plan,
    sample_figure,
    sample_header,
    sample_section,
    sample_table,
)

__all__ = [
    "BODY_CATEGORIES",
    "NODE_CATALOG",
    "BulletPlan",
    "CaptionPlan",
    "CellPlan",
    "ChartSubplot",
    "DefectOp",
    "DefectPlan",
    "DocumentPlan",
    "EquationGroup",
    "EquationPlan",
    "FigurePlan",
    "HeaderColumn",
    "HeaderPlan",
    "PageGeometry",
    "ParagraphPlan",
    "SectionPlan",
    "TablePlan",
    "TextStyle",
    "TitlePlan",
    "build_registry",
    "catalog_position",
    "load_plan",
    "plan_from_dict",
    "plan_to_dict",
    "sample_document_plan",
    "sample_figure",
    "sample_header",
    "sample_section",
    "sample_table",
    "save_plan",
]
