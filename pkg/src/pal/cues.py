"""Non-verbal cue markup embedded in patient dialogue.

Patient replies carry stage directions between asterisks, e.g.::

    *pauses* I don't know what to say.

Grammar:

* A cue is a maximal run of characters between a pair of asterisks that
  contains no asterisk and no newline. An unpaired asterisk is literal text.
* Cues are removed from the spoken text and recorded with the character
  offset where they stood. Horizontal whitespace surrounding a removed cue
  collapses to a single space; at the start or end of the text it is dropped.
* Several cues may share one offset (nothing but whitespace between them).

``parse_emotional_cues`` is the batch form; ``CueStreamScanner`` applies the
same grammar incrementally to streamed chunks so the first text piece can be
emitted before the reply is complete. Bracketed markers (``[pauses]``) use
the identical grammar and are used when rendering transcripts for analysis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_HWS = " \t"


@dataclass(frozen=True)
class EmotionalCue:
    """A non-verbal action at a character offset of the cleaned text."""

    position: int
    action: str


def _marker_pattern(open_mark: str, close_mark: str) -> re.Pattern[str]:
    body = "[^" + re.escape(open_mark + close_mark) + "\\n]+"
    return re.compile(re.escape(open_mark) + "(" + body + ")" + re.escape(close_mark))


_STAR = _marker_pattern("*", "*")
_BRACKET = _marker_pattern("[", "]")


def _parse_marked(raw: str, pattern: re.Pattern[str]) -> tuple[str, list[EmotionalCue]]:
    matches = list(pattern.finditer(raw))
    if not matches:
        return raw, []

    literals: list[str] = []
    actions: list[str] = []
    pos = 0
    for m in matches:
        literals.append(raw[pos : m.start()])
        actions.append(m.group(1))
        pos = m.end()
    literals.append(raw[pos:])

    first = literals[0]
    head = first.rstrip(_HWS)
    pending_ws = first[len(head) :]
    parts: list[str] = [head]
    length = len(head)
    cues: list[EmotionalCue] = []
    waiting: list[str] = []

    for i, action in enumerate(actions):
        waiting.append(action)
        lit = literals[i + 1]
        last = i == len(actions) - 1
        stripped = lit.lstrip(_HWS)
        pending_ws += lit[: len(lit) - len(stripped)]
        if last:
            core, trail = stripped, ""
        else:
            core = stripped.rstrip(_HWS)
            trail = stripped[len(core) :]
        if core:
            if length and pending_ws:
                parts.append(" ")
                length += 1
            for a in waiting:
                cues.append(EmotionalCue(position=length, action=a))
            waiting.clear()
            parts.append(core)
            length += len(core)
            pending_ws = trail

    for a in waiting:
        cues.append(EmotionalCue(position=length, action=a))
    return "".join(parts), cues


def parse_emotional_cues(raw: str) -> tuple[str, list[EmotionalCue]]:
    """Split raw patient markup into (spoken text, cues).

    Total over all strings; malformed markup degrades to literal text.
    """
    return _parse_marked(raw, _STAR)


def parse_bracket_cues(raw: str) -> tuple[str, list[EmotionalCue]]:
    """Same grammar with ``[...]`` markers, as used in transcript files."""
    return _parse_marked(raw, _BRACKET)


def strip_cues_for_tts(raw: str) -> str:
    """Spoken text only, for speech synthesis. May be empty."""
    return parse_emotional_cues(raw)[0]


def render_cue_text(
    text: str,
    cues: list[EmotionalCue] | tuple[EmotionalCue, ...],
    open_mark: str = "*",
    close_mark: str = "*",
    *,
    spaced: bool = False,
) -> str:
    """Re-insert cue markers into cleaned text at their recorded offsets.

    The plain form inserts markers directly at each offset; parsing the
    result reproduces (text, cues) for any pair that the parser can produce.
    ``spaced=True`` pads markers with spaces for human-readable transcripts.
    """
    out: list[str] = []
    prev = 0
    pending_gap = False

    def emit(segment: str) -> None:
        nonlocal pending_gap
        if not segment:
            return
        if pending_gap and segment[0] not in _HWS:
            out.append(" ")
        pending_gap = False
        out.append(segment)

    for cue in cues:
        emit(text[prev : cue.position])
        if spaced:
            if out and not pending_gap and out[-1][-1] not in _HWS:
                out.append(" ")
            pending_gap = False
            out.append(f"{open_mark}{cue.action}{close_mark}")
            pending_gap = True
        else:
            pending_gap = False
            out.append(f"{open_mark}{cue.action}{close_mark}")
        prev = cue.position
    emit(text[prev:])
    return "".join(out)


class CueStreamScanner:
    """Incremental cue splitter for streamed reply chunks.

    Emits ``("text", piece)`` and ``("cue", action)`` events as soon as they
    are unambiguous; only an unclosed marker or an undecided whitespace run
    is held back. The concatenated text pieces and the cue action sequence
    match ``parse_emotional_cues`` applied to the full input.
    """

    def __init__(self) -> None:
        self._hold_ws = ""
        self._junction = False
        self._emitted_any = False
        self._star: str | None = None
        self._events: list[tuple[str, str]] = []
        self._textbuf: list[str] = []

    def _flush_text(self) -> None:
        if self._textbuf:
            self._events.append(("text", "".join(self._textbuf)))
            self._textbuf.clear()

    def _literal_char(self, ch: str) -> None:
        if ch in _HWS:
            self._hold_ws += ch
            return
        if self._junction:
            if self._emitted_any and self._hold_ws:
                self._textbuf.append(" ")
            self._junction = False
        elif self._hold_ws:
            self._textbuf.append(self._hold_ws)
        self._hold_ws = ""
        self._textbuf.append(ch)
        self._emitted_any = True

    def _literal_run(self, s: str) -> None:
        for ch in s:
            self._literal_char(ch)

    def feed(self, chunk: str) -> list[tuple[str, str]]:
        """Consume a chunk, returning the events it made unambiguous."""
        for ch in chunk:
            if self._star is not None:
                if ch == "*":
                    if self._star:
                        self._flush_text()
                        self._events.append(("cue", self._star))
                        self._junction = True
                        self._star = None
                    else:
                        # "**": the first asterisk is literal, the second
                        # may still open a cue.
                        self._literal_char("*")
                elif ch == "\n":
                    self._literal_run("*" + self._star)
                    self._literal_char("\n")
                    self._star = None
                else:
                    self._star += ch
            elif ch == "*":
                self._star = ""
            else:
                self._literal_char(ch)
        self._flush_text()
        out = self._events
        self._events = []
        return out

    def finish(self) -> list[tuple[str, str]]:
        """Resolve any held state at end of stream and return final events."""
        if self._star is not None:
            pending = self._star
            self._star = None
            self._literal_run("*" + pending)
        if not self._junction and self._hold_ws:
            self._textbuf.append(self._hold_ws)
        self._hold_ws = ""
        self._junction = False
        self._flush_text()
        out = self._events
        self._events = []
        return out
