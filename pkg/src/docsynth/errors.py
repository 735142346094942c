"""Exception types shared across the generator pipeline.

Every error carries enough context (node id, field, file position) to be
surfaced verbatim by the CLI as a machine-readable code plus message.
"""


class DocsynthError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- probnet ---------------------------------------------------------------

class InvalidHyperparam(DocsynthError):
    def __init__(self, node_id: str, field: str, reason: str):
        super().__init__(f"node {node_id!r}, field {field!r}: {reason}")
        self.node_id = node_id
        self.field = field


class DuplicateId(DocsynthError):
    def __init__(self, node_id: str):
        super().__init__(f"node id {node_id!r} already registered")
        self.node_id = node_id


class UnknownParent(DocsynthError):
    def __init__(self, node_id: str, parent_id: str):
        super().__init__(f"node {node_id!r} references unknown parent {parent_id!r}")
        self.node_id = node_id
        self.parent_id = parent_id


class CycleDetected(DocsynthError):
    def __init__(self, node_ids):
        ids = ", ".join(sorted(node_ids))
        super().__init__(f"dependency cycle among nodes: {ids}")
        self.node_ids = list(node_ids)


class MissingTemplateParam(DocsynthError):
    def __init__(self, node_id: str):
        super().__init__(f"no hyperparameters supplied for node {node_id!r}")
        self.node_id = node_id


class DimensionMismatch(DocsynthError):
    pass


class NegativeCount(DocsynthError):
    pass


class ObservationBelowLocation(DocsynthError):
    def __init__(self, value: float, location: float):
        super().__init__(f"observation {value} below location {location}")
        self.value = value
        self.location = location


class UnknownNode(DocsynthError):
    def __init__(self, node_id: str):
        super().__init__(f"unknown node {node_id!r}")
        self.node_id = node_id


class UnsupportedFamily(DocsynthError):
    def __init__(self, node_id: str, family: str):
        super().__init__(
            f"node {node_id!r}: family {family!r} has no closed-form posterior update"
        )
        self.node_id = node_id
        self.family = family


# --- templates --------------------------------------------------------------

class ParseError(DocsynthError):
    def __init__(self, path, detail: str):
        super().__init__(f"{path}: {detail}")
        self.path = str(path)


class MissingNodeParams(DocsynthError):
    def __init__(self, template_id: str, node_ids):
        ids = ", ".join(sorted(node_ids))
        super().__init__(f"template {template_id!r} missing params for nodes: {ids}")
        self.template_id = template_id
        self.node_ids = sorted(node_ids)


class UnresolvedResource(DocsynthError):
    def __init__(self, template_id: str, ref: str):
        super().__init__(f"template {template_id!r}: cannot resolve resource {ref!r}")
        self.template_id = template_id
        self.ref = ref


class UnknownOverrideKey(DocsynthError):
    def __init__(self, key: str):
        super().__init__(f"unknown override key {key!r}")
        self.key = key


# --- subnets ----------------------------------------------------------------

class EmptyImageLibrary(DocsynthError):
    pass


# --- layout -----------------------------------------------------------------

class FontResolutionFailed(DocsynthError):
    def __init__(self, ref: str):
        super().__init__(f"cannot resolve font file {ref!r}")
        self.ref = ref


class ElementTooLargeForPage(DocsynthError):
    pass


class TokenWiderThanColumn(DocsynthError):
    def __init__(self, token: str, max_width: int):
        super().__init__(f"token {token!r} wider than column ({max_width}px)")
        self.token = token
        self.max_width = max_width


# --- render -----------------------------------------------------------------

class FontGlyphMissing(DocsynthError):
    def __init__(self, char: str):
        super().__init__(f"no configured font covers U+{ord(char):04X} ({char!r})")
        self.char = char


class ImageDecodeError(DocsynthError):
    pass


class BoxTooSmall(DocsynthError):
    pass


# --- cli / datasets ---------------------------------------------------------

class MissingManifest(DocsynthError):
    def __init__(self, path):
        super().__init__(f"no dataset manifest at {path}")
        self.path = str(path)
