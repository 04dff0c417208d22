from models import Functionality, Monolith, Trace
from monolith import validate_monolith
from tests.conftest import make_monolith


def codes(issues):
    return [issue.code for issue in issues]


def test_well_formed_monolith_has_no_errors(running_example):
    report = validate_monolith(running_example)
    assert report.errors == []
    assert report.accepted


def test_functionality_without_traces_is_an_error():
    m = Monolith(functionalities={"empty": Functionality(name="empty")}, entities={})
    report = validate_monolith(m)
    assert codes(report.errors) == ["NONEMPTY_TRACES"]
    assert not report.accepted


def test_duplicate_trace_id_is_an_error(running_example):
    trace = running_example.functionalities["f1"].traces[0]
    m = Monolith(
        functionalities={"f1": Functionality(name="f1", traces=(trace, Trace(id=0, accesses=trace.accesses[:1])))},
        entities=running_example.entities,
    )
    assert "DUPLICATE_TRACE_ID" in codes(validate_monolith(m).errors)


def test_unused_entity_is_a_warning():
    m = make_monolith({"f1": [[(1, "R")]]}, entities={1: None, 2: "Ghost"})
    report = validate_monolith(m)
    assert report.accepted
    assert codes(report.warnings) == ["UNUSED_ENTITY"]
    assert "Ghost" in report.warnings[0].message


def test_duplicated_traces_are_warnings():
    m = make_monolith({
        "f1": [[(1, "R")], [(1, "R")]],
        "f2": [[(1, "R")]],
    })
    warnings = codes(validate_monolith(m).warnings)
    assert "DUPLICATE_TRACES" in warnings
    assert "IDENTICAL_FUNCTIONALITIES" in warnings
