"""Common provider-facing types: messages, streams, errors, audio helpers.

Adapters for chat completion, speech-to-text, and text-to-speech all share
the shapes defined here so the engine never depends on a concrete vendor.
Errors are classified as retryable (timeouts, transport faults, throttling,
server-side failures) or not (invalid requests, authentication), and the
classification is total: every failure an adapter can raise maps to exactly
one of the types below.
"""

from __future__ import annotations

import wave
from dataclasses import dataclass
from fractions import Fraction
from io import BytesIO
from typing import Iterator, Protocol

from pal.errors import PalError
from pal.providers.usage import UsageRecord

# Media types accepted for clinician audio, mapped to blob file extensions.
# WAV covers the PCM case; the rest are compressed containers.
SUPPORTED_AUDIO_TYPES = {
    "audio/wav": ".wav",
    "audio/x-wav": ".wav",
    "audio/webm": ".webm",
    "audio/mpeg": ".mp3",
    "audio/ogg": ".ogg",
}

AUDIO_EXTENSION_TYPES = {
    ".wav": "audio/wav",
    ".webm": "audio/webm",
    ".mp3": "audio/mpeg",
    ".ogg": "audio/ogg",
    ".bin": "application/octet-stream",
}

# Fallback rate for estimating the duration of compressed audio whose
# container we do not parse. Flagged as estimated in the usage record.
_FALLBACK_BYTES_PER_SECOND = 16_000


class ProviderError(PalError):
    """A provider call failed. ``retryable`` says whether retrying can help."""

    code = "provider_error"

    def __init__(self, message: str, *, retryable: bool, status: int | None = None):
        super().__init__(message)
        self.retryable = retryable
        self.status = status


class ProviderTimeoutError(ProviderError):
    def __init__(self, message: str = "provider call timed out"):
        super().__init__(message, retryable=True)


class ProviderTransportError(ProviderError):
    def __init__(self, message: str):
        super().__init__(message, retryable=True)


class ProviderStatusError(ProviderError):
    """Non-success HTTP status. Throttling and server errors are retryable."""

    def __init__(self, status: int, message: str | None = None):
        super().__init__(
            message or f"provider returned status {status}",
            retryable=status_is_retryable(status),
            status=status,
        )


class ProviderProtocolError(ProviderError):
    """The provider answered with a shape we cannot interpret."""

    def __init__(self, message: str):
        super().__init__(message, retryable=False)


def status_is_retryable(status: int) -> bool:
    return status in (408, 429) or 500 <= status <= 599


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str


@dataclass(frozen=True)
class ChatResult:
    text: str
    usage: UsageRecord


@dataclass(frozen=True)
class Transcription:
    text: str
    usage: UsageRecord


class TextStream:
    """Iterator of reply text chunks.

    ``usage`` is populated when the stream ends: on success with the call's
    usage record, and on a mid-stream provider failure with an estimated
    record covering the chunks that were produced before the failure.
    """

    def __init__(self) -> None:
        self.usage: UsageRecord | None = None
        self.text: str | None = None
        self._it: Iterator[str] | None = None

    def _bind(self, it: Iterator[str]) -> "TextStream":
        self._it = it
        return self

    def __iter__(self) -> "TextStream":
        return self

    def __next__(self) -> str:
        assert self._it is not None
        return next(self._it)

    def close(self) -> None:
        if self._it is not None and hasattr(self._it, "close"):
            self._it.close()  # type: ignore[attr-defined]


class AudioStream:
    """Iterator of synthesized audio chunks; ``usage`` set on completion."""

    def __init__(self, media_type: str) -> None:
        self.media_type = media_type
        self.usage: UsageRecord | None = None
        self._it: Iterator[bytes] | None = None

    def _bind(self, it: Iterator[bytes]) -> "AudioStream":
        self._it = it
        return self

    def __iter__(self) -> "AudioStream":
        return self

    def __next__(self) -> bytes:
        assert self._it is not None
        return next(self._it)

    def close(self) -> None:
        if self._it is not None and hasattr(self._it, "close"):
            self._it.close()  # type: ignore[attr-defined]


class ChatProvider(Protocol):
    model_id: str

    def stream(self, messages: list[ChatMessage], *, session_id: str | None = None) -> TextStream: ...

    def complete(self, messages: list[ChatMessage], *, session_id: str | None = None) -> ChatResult: ...


class SpeechToTextProvider(Protocol):
    model_id: str

    def transcribe(
        self, audio: bytes, media_type: str, *, session_id: str | None = None
    ) -> Transcription: ...


class TextToSpeechProvider(Protocol):
    voice_id: str
    output_media_type: str

    def synthesize_stream(self, text: str, *, session_id: str | None = None) -> AudioStream: ...


def audio_duration_seconds(data: bytes, media_type: str) -> tuple[float, bool]:
    """Best-effort audio duration in seconds, with an ``estimated`` flag.

    WAV durations are read from the container header and are exact. For
    compressed containers the duration is estimated from the byte length.
    """
    if SUPPORTED_AUDIO_TYPES.get(media_type) == ".wav":
        try:
            with wave.open(BytesIO(data)) as wav:
                rate = wav.getframerate()
                if rate > 0:
                    seconds = Fraction(wav.getnframes(), rate)
                    return float(seconds), False
        except (wave.Error, EOFError):
            pass
    return len(data) / _FALLBACK_BYTES_PER_SECOND, True


def estimate_tokens(text: str) -> int:
    """Character-based token estimate (about four characters per token)."""
    return (len(text) + 3) // 4


def estimate_message_tokens(messages: list[ChatMessage]) -> int:
    return sum(estimate_tokens(m.content) for m in messages)
