"""Regenerates crates/core/resources/toy_embeddings.txt.

Each word gets a unit axis for its synonym group, a weaker share of
hand-picked topic axes, and seeded noise (`_self` rescales the group
axis); values are rounded to four
decimals. Run from the repository root.
"""
import numpy as np

TOPICS = ["wealth", "food", "place", "sport", "animal", "study",
          "anger", "joy", "fear", "sad", "social", "rest"]
T = {name: i for i, name in enumerate(TOPICS)}

WORDS = {
    "money": {"wealth": 1.5},
    "cash": {"wealth": 1.5, "social": 0.1},
    "possess": {"wealth": 1.5, "social": 0.2, "_self": 0.6},
    "own": {"wealth": 1.5, "_self": 0.6},
    "has": {"wealth": 0.4, "social": 0.2},
    "have": {"wealth": 0.4, "social": 0.2},
    "eating": {"food": 1.0},
    "eat": {"food": 1.0},
    "food": {"food": 0.9, "place": 0.1},
    "hunger": {"food": 0.85, "sad": 0.25},
    "hungry": {"food": 0.85, "sad": 0.2},
    "drink": {"food": 0.7, "joy": 0.1},
    "juice": {"food": 0.7, "joy": 0.2},
    "restaurant": {"food": 0.5, "place": 0.6},
    "go": {"place": 1.0},
    "park": {"place": 0.6, "sport": 0.4, "animal": 0.2},
    "station": {"place": 0.8},
    "surrounding": {"place": 0.7, "fear": 0.1},
    "stand": {"place": 0.4, "rest": 0.3},
    "library": {"study": 0.7, "place": 0.4},
    "exam": {"study": 0.9, "fear": 0.2},
    "knowledgeable": {"study": 1.0},
    "aware": {"study": 0.6, "fear": 0.3},
    "read": {"study": 0.8, "rest": 0.2},
    "book": {"study": 0.8},
    "curiosity": {"study": 0.8, "joy": 0.2},
    "engage": {"sport": 0.6, "social": 0.3},
    "activity": {"sport": 0.8, "social": 0.2},
    "physical": {"sport": 0.7, "rest": -0.2},
    "try": {"sport": 0.4, "study": 0.3},
    "ride": {"sport": 0.7, "animal": 0.3},
    "horse": {"animal": 0.9, "sport": 0.3},
    "racing": {"sport": 0.9},
    "climbing": {"sport": 0.9, "animal": 0.2},
    "play": {"sport": 0.6, "joy": 0.4},
    "guitar": {"sport": 0.3, "joy": 0.5, "study": 0.2},
    "dragon": {"animal": 0.5, "fear": 0.5},
    "dog": {"animal": 1.0},
    "bird": {"animal": 0.9, "place": 0.1},
    "feel": {"joy": 0.3, "sad": 0.3, "anger": 0.2},
    "fail": {"sad": 0.5, "anger": 0.5},
    "anger": {"anger": 1.0},
    "angry": {"anger": 1.0},
    "joy": {"joy": 1.0},
    "happy": {"joy": 0.95},
    "fear": {"fear": 1.0},
    "sadness": {"sad": 1.0},
    "surprise": {"joy": 0.4, "fear": 0.4},
    "disgust": {"anger": 0.4, "food": 0.3, "sad": 0.2},
    "help": {"social": 1.0},
    "customer": {"social": 0.7, "wealth": 0.3},
    "honor": {"social": 0.5, "joy": 0.3},
    "family": {"social": 0.8, "joy": 0.2},
    "sleep": {"rest": 1.0},
    "tired": {"rest": 0.8, "sad": 0.2},
    "tranquility": {"rest": 0.8, "joy": 0.2},
}

# words sharing a group are near-synonyms; every other word is its own group
GROUPS = [
    {"money", "cash"},
    {"possess", "own", "has", "have"},
    {"eating", "eat", "hunger", "hungry", "food"},
    {"anger", "angry"},
    {"joy", "happy"},
]
TOPIC_SCALE = 0.6
NOISE = 0.05

group_of = {}
for word in WORDS:
    for i, g in enumerate(GROUPS):
        if word in g:
            group_of[word] = i
            break
    else:
        group_of[word] = len(set(group_of.values()) | set(range(len(GROUPS))))
n_groups = max(group_of.values()) + 1
dim = len(TOPICS) + n_groups

rng = np.random.default_rng(20190513)
lines = [f"{len(WORDS)} {dim}"]
for word, mix in WORDS.items():
    v = np.zeros(dim)
    for topic, weight in mix.items():
        if topic != "_self":
            v[T[topic]] += TOPIC_SCALE * weight
    v[len(TOPICS) + group_of[word]] += mix.get("_self", 1.0)
    v += rng.normal(0.0, NOISE, dim)
    lines.append(word + " " + " ".join(f"{x:.4f}" for x in v))

with open("crates/core/resources/toy_embeddings.txt", "w") as f:
    f.write("\n".join(lines) + "\n")
