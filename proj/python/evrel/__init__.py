"""Python access to the evrel annotation engine.

Everything structured comes back as plain dicts and lists.
"""

import json

from . import _evrel

compose = _evrel.compose
invert = _evrel.invert


class EngineError(Exception):
    def __init__(self, code, message, blocking=()):
        super().__init__(message)
        self.code = code
        self.blocking = list(blocking)


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _evrel.EngineError as exc:
        detail = json.loads(str(exc))
        raise EngineError(detail["code"], detail["message"], detail["blocking"]) from None


def _as_text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def parse_document(doc):
    return json.loads(_call(_evrel.parse_document, _as_text(doc)))


def validate_export(export):
    return json.loads(_call(_evrel.validate_export, _as_text(export)))


def cohen_kappa(a, b):
    return json.loads(_call(_evrel.cohen_kappa, list(a), list(b)))


def bcubed_f1(system, reference):
    return json.loads(_call(_evrel.bcubed_f1, system, reference))


def agreement(a, b, kind):
    return json.loads(_call(_evrel.agreement, _as_text(a), _as_text(b), kind))


def simulate(events, policy="chronological", seed=1):
    return json.loads(_call(_evrel.simulate, events, policy, seed))


class Session:
    def __init__(self, native):
        self._s = native

    @classmethod
    def start(cls, document, annotator_id, session_id="session"):
        return cls(_call(_evrel.Session.start, _as_text(document), annotator_id, session_id))

    @classmethod
    def load(cls, saved):
        return cls(_call(_evrel.Session.load, saved))

    @property
    def phase(self):
        return self._s.phase()

    def set_status(self, mention, status):
        _call(self._s.set_status, mention, status)

    def annotate(self, a, b, label):
        return json.loads(_call(self._s.annotate, a, b, label))

    def form_cluster(self, focal, members, confirm=False):
        return json.loads(_call(self._s.form_cluster, focal, list(members), confirm))

    def record_causes(self, focal, causes):
        _call(self._s.record_causes, focal, list(causes))

    def advance(self):
        _call(self._s.advance)

    def back(self):
        _call(self._s.back)

    def next_unit(self):
        return json.loads(self._s.next_unit())

    def snapshot(self):
        return json.loads(self._s.snapshot())

    def export(self):
        return json.loads(_call(self._s.export))

    def save(self):
        return self._s.save()

    def state(self):
        return json.loads(self._s.state())
