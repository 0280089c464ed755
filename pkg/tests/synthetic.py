"""Synthetic three-class stance corpus with planted hashtag and content-word signals.

Every FAVOR tweet carries ``#yesx`` and every AGAINST tweet ``#nox``; NONE tweets
carry a neutral ``#news``. Content words are weaker: a tweet has three words from its
own class list, one word from another class's list and four shared filler words.
"""

import random
import string

from stancekit.types import StanceLabel, Tweet, TweetSource

TOPIC = "synth"

_HASHTAGS = {
    StanceLabel.FAVOR: "#yesx",
    StanceLabel.AGAINST: "#nox",
    StanceLabel.NONE: "#news",
}
_PREFIXES = {StanceLabel.FAVOR: "fav", StanceLabel.AGAINST: "ant", StanceLabel.NONE: "neu"}
_FILLERS = ["the", "and", "people", "today", "what", "this", "about", "really"]


def _class_words(label: StanceLabel) -> list[str]:
    return [_PREFIXES[label] + letter for letter in string.ascii_lowercase[:10]]


def generate(per_class: int, seed: int, id_prefix: str = "s") -> list[Tweet]:
    """Generate ``per_class`` tweets for each label, interleaved FAVOR, AGAINST, NONE."""
    rng = random.Random(seed)
    labels = list(_HASHTAGS)
    tweets: list[Tweet] = []
    for i in range(per_class):
        for label in labels:
            other = rng.choice([lab for lab in labels if lab is not label])
            words = rng.sample(_class_words(label), 3)
            words.append(rng.choice(_class_words(other)))
            words.extend(rng.sample(_FILLERS, 4))
            rng.shuffle(words)
            words.insert(rng.randrange(len(words) + 1), _HASHTAGS[label])
            tweets.append(
                Tweet(
                    id=f"{id_prefix}{i}-{label.value.lower()}",
                    text=" ".join(words),
                    topic=TOPIC,
                    gold_stance=label,
                    source=TweetSource.OFFICIAL,
                )
            )
    return tweets


def train_test(seed: int = 7) -> tuple[list[Tweet], list[Tweet]]:
    """600 training and 300 test tweets."""
    return generate(200, seed, "train"), generate(100, seed + 1, "test")
