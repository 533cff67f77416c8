from .graph import (
    area_under,
    build_graph_domain,
    build_strip_domain,
    evaluate,
    minimum_on,
    overlap_interval,
    reflect_domain,
    reflect_quadruple,
    scale_vertical,
    step_pieces,
    validate_quadruple,
)
from .spec_io import (
    DomainSpec,
    dump_domain_spec,
    load_domain_spec,
    parse_domain_spec,
    read_domain_spec,
)

__all__ = [
    "area_under",
    "build_graph_domain",
    "build_strip_domain",
    "evaluate",
    "minimum_on",
    "overlap_interval",
    "reflect_domain",
    "reflect_quadruple",
    "scale_vertical",
    "step_pieces",
    "validate_quadruple",
    "DomainSpec",
    "dump_domain_spec",
    "load_domain_spec",
    "parse_domain_spec",
    "read_domain_spec",
]
