"""Exception hierarchy shared by every module."""


class SpecPosetError(Exception):
    pass


class CycleDetected(SpecPosetError):
    def __init__(self, edge=None, message=None):
        self.edge = edge
        if message is None:
            message = "cover relation contains a directed cycle"
            if edge is not None:
                message += f" (closing edge {edge[0]!r} -> {edge[1]!r})"
        super().__init__(message)


class UnknownNode(SpecPosetError, KeyError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"unknown node id {node_id!r}")

    def __str__(self):
        return self.args[0]


class InvariantViolation(SpecPosetError):
    def __init__(self, where, rule):
        self.where = where
        self.rule = rule
        super().__init__(f"{where}: {rule}")


class PartitionInvalid(SpecPosetError):
    def __init__(self, report):
        self.report = report
        lines = "; ".join(str(v) for v in report.violations)
        super().__init__(f"partition is not minfeasible: {lines}")


class NotAPartition(SpecPosetError):
    pass


class MissingFlags(SpecPosetError):
    def __init__(self, node_ids, reason):
        self.node_ids = tuple(sorted(node_ids))
        super().__init__(f"ring flags required on {', '.join(self.node_ids)} ({reason})")


class NotConstructive(SpecPosetError):
    pass


class NotMinimal(SpecPosetError):
    pass


class ProvenanceMismatch(SpecPosetError):
    pass


class EmptyX(SpecPosetError, ValueError):
    pass


class DocumentSyntaxError(SpecPosetError):
    def __init__(self, msg, line, col):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {msg}")
