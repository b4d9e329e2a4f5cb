"""Active emotions with intensity decay, per-type thresholds, and mood.

Intensity decays exponentially by a per-type half-life; mood is a slow
valence scalar in [-10, 10] nudged by each accepted emotion and drifting
linearly back to zero.  The exact constants are engine calibration knobs:
no standard equations exist for them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .wfn import Event, Name

INTENSITY_MAX = 10.0
INTENSITY_FLOOR = 0.1
DEFAULT_HALF_LIFE = 8.0
MOOD_SCALE = 0.3
MOOD_DECAY_PER_TICK = 0.05
MOOD_MIN, MOOD_MAX = -10.0, 10.0


class EmotionType(enum.Enum):
    JOY = "Joy"
    DISTRESS = "Distress"
    HAPPY_FOR = "Happy-For"
    GLOATING = "Gloating"
    RESENTMENT = "Resentment"
    PITY = "Pity"
    PRIDE = "Pride"
    SHAME = "Shame"
    ADMIRATION = "Admiration"
    REPROACH = "Reproach"
    LOVE = "Love"
    HATE = "Hate"
    GRATIFICATION = "Gratification"
    REMORSE = "Remorse"
    GRATITUDE = "Gratitude"
    ANGER = "Anger"
    HOPE = "Hope"
    FEAR = "Fear"
    SATISFACTION = "Satisfaction"
    FEARS_CONFIRMED = "Fears-Confirmed"
    RELIEF = "Relief"
    DISAPPOINTMENT = "Disappointment"

    @property
    def positive(self) -> bool:
        return self in _POSITIVE

    @property
    def valence(self) -> str:
        return "Positive" if self.positive else "Negative"

    @classmethod
    def parse(cls, text: str) -> "EmotionType":
        wanted = text.replace("_", "-").casefold()
        for member in cls:
            if member.value.casefold() == wanted:
                return member
        raise ValueError(f"unknown emotion type {text!r}")

    def __str__(self):
        return self.value


_POSITIVE = frozenset({
    EmotionType.JOY, EmotionType.HAPPY_FOR, EmotionType.GLOATING,
    EmotionType.PRIDE, EmotionType.ADMIRATION, EmotionType.LOVE,
    EmotionType.GRATIFICATION, EmotionType.GRATITUDE, EmotionType.HOPE,
    EmotionType.SATISFACTION, EmotionType.RELIEF,
})

ALL_EMOTION_TYPES = tuple(EmotionType)


@dataclass
class Emotion:
    """One OCC emotion instance; valence follows from the type."""

    type: EmotionType
    intensity: float
    cause: Event | None = None
    target: Name | None = None
    tick: int = 0

    def __post_init__(self):
        if self.intensity <= 0:
            raise ValueError(f"intensity must be positive, got {self.intensity}")
        self.intensity = min(self.intensity, INTENSITY_MAX)

    @property
    def positive(self) -> bool:
        return self.type.positive

    @property
    def valence(self) -> str:
        return self.type.valence

    def _dedupe_key(self):
        return (self.type, self.cause.name.canonical() if self.cause else None)


@dataclass
class EmotionalState:
    """Container for the active emotions and the mood scalar of one agent."""

    thresholds: dict[EmotionType, float] = field(default_factory=dict)
    half_lives: dict[EmotionType, float] = field(default_factory=dict)
    mood: float = 0.0
    emotions: list[Emotion] = field(default_factory=list)

    def __post_init__(self):
        self.mood = _clamp_mood(self.mood)

    def threshold(self, type_: EmotionType) -> float:
        return self.thresholds.get(type_, 0.0)

    def half_life(self, type_: EmotionType) -> float:
        return self.half_lives.get(type_, DEFAULT_HALF_LIFE)

    def add_emotion(self, emotion: Emotion) -> bool:
        """Insert after subtracting the type threshold; update mood.

        Returns False when the effective intensity is not positive or when
        an equal or stronger emotion with the same type and cause is already
        active.  Re-raising an active emotion only moves mood by the
        intensity increase, so repetition cannot pump mood without bound.
        """
        effective = min(emotion.intensity, INTENSITY_MAX) - self.threshold(emotion.type)
        if effective <= 0:
            return False
        previous = 0.0
        key = emotion._dedupe_key()
        for i, active in enumerate(self.emotions):
            if active._dedupe_key() == key:
                if active.intensity >= effective:
                    return False
                previous = active.intensity
                del self.emotions[i]
                break
        self.emotions.append(replace(emotion, intensity=effective))
        delta = (effective - previous) * MOOD_SCALE
        self.mood = _clamp_mood(self.mood + (delta if emotion.positive else -delta))
        return True

    def decay(self, ticks: int) -> None:
        if ticks < 0:
            raise ValueError("ticks must be >= 0")
        if ticks == 0:
            return
        survivors = []
        for emotion in self.emotions:
            emotion.intensity *= 0.5 ** (ticks / self.half_life(emotion.type))
            if emotion.intensity >= INTENSITY_FLOOR:
                survivors.append(emotion)
        self.emotions = survivors
        drift = MOOD_DECAY_PER_TICK * ticks
        if self.mood > 0:
            self.mood = max(0.0, self.mood - drift)
        else:
            self.mood = min(0.0, self.mood + drift)

    def strongest_emotion(self) -> Emotion | None:
        best: Emotion | None = None
        for emotion in self.emotions:
            if best is None or emotion.intensity > best.intensity or (
                emotion.intensity == best.intensity and emotion.tick >= best.tick
            ):
                best = emotion
        return best

    def mood_value(self) -> float:
        return self.mood

    def active(self, type_: EmotionType | None = None) -> list[Emotion]:
        if type_ is None:
            return list(self.emotions)
        return [e for e in self.emotions if e.type == type_]


def _clamp_mood(value: float) -> float:
    return max(MOOD_MIN, min(MOOD_MAX, value))
