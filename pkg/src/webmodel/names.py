"""Single source for the identifiers shared between server modules and clients.

Every metaclass name, attribute name, reference name, diagram type tag and
validator id lives here. The HTTP layer republishes them via the typeids
endpoint so clients can verify their own copies at startup instead of
drifting silently.
"""

# metaclass names
PROJECT = "Project"
REQUIREMENTS_PACKAGE = "RequirementsPackage"
REQUIREMENT = "Requirement"
COMPONENT_ARCHITECTURE = "ComponentArchitecture"
COMPONENT = "Component"
CHANNEL = "Channel"
ALLOCATION_TABLE = "AllocationTable"
ALLOCATION_ENTRY = "AllocationEntry"

# attribute names
ATTR_NAME = "name"
ATTR_DESCRIPTION = "description"
ATTR_AUTHOR_EMAIL = "authorEmail"
ATTR_COMMENT = "comment"
ATTR_STRONGLY_CAUSAL = "stronglyCausal"

# cross-reference names
REF_SOURCE = "source"
REF_TARGET = "target"
REF_REQUIREMENT = "requirement"
REF_COMPONENT = "component"

# validator ids
VALIDATOR_EMAIL = "email"
VALIDATOR_WEAK_CAUSALITY = "weak-causality"
VALIDATOR_ALLOCATION = "allocation-references"
VALIDATOR_LOADER = "loader"

# diagram type tags
DIAGRAM_TYPE = "component-diagram"
TAG_GRAPH = "graph"
TAG_NODE_COMPONENT = "node:component"
TAG_EDGE_CHANNEL = "edge:channel"
TAG_LABEL_NAME = "label:name"

MODEL_FILE_SUFFIX = ".model.json"
