"""Fixed catalog of indoor region labels and the human activities placed in them."""

from __future__ import annotations

from dataclasses import dataclass

# The 29 region labels every viewpoint must carry. Order is part of the
# catalog contract (activity ids are derived from it), so never reorder.
REGIONS: tuple[str, ...] = (
    "bathroom",
    "bedroom",
    "closet",
    "dining room",
    "entryway/foyer/lobby",
    "family room",
    "garage",
    "hallway",
    "library",
    "laundry room/mudroom",
    "kitchen",
    "living room",
    "meeting room/conference room",
    "lounge",
    "office",
    "porch/terrace/deck/driveway",
    "recreation/game room",
    "stairs",
    "toilet",
    "utility room/tool room",
    "tv room",
    "workout/gym/exercise room",
    "outdoor areas",
    "balcony",
    "other room",
    "bar",
    "classroom",
    "dining booth",
    "spa/sauna",
)

REGION_SET = frozenset(REGIONS)

_ACTIVITY_TEXT: dict[str, tuple[str, ...]] = {
    "bathroom": (
        "brushing teeth at the sink",
        "washing hands and face",
        "wiping the mirror clean",
        "stepping out of the shower and drying off",
        "restocking towels on the rack",
    ),
    "bedroom": (
        "folding laundry on the bed",
        "reading a book propped against the headboard",
        "making the bed and fluffing pillows",
        "getting dressed in front of the wardrobe",
        "stretching after waking up",
    ),
    "closet": (
        "sorting clothes onto hangers",
        "searching a shelf for a pair of shoes",
        "boxing up off-season jackets",
        "trying on a coat in the doorway",
        "stacking storage bins",
    ),
    "dining room": (
        "setting the table for dinner",
        "eating a meal with unhurried bites",
        "clearing plates after lunch",
        "wiping down the dining table",
        "arranging flowers as a centerpiece",
    ),
    "entryway/foyer/lobby": (
        "taking off shoes by the door",
        "hanging a coat on the rack",
        "checking mail at the entry table",
        "greeting a visitor at the door",
        "pacing while waiting for a ride",
    ),
    "family room": (
        "playing a board game on the floor",
        "chatting on the sofa",
        "tidying toys into a basket",
        "practicing guitar in the corner",
        "doing a jigsaw puzzle at the low table",
    ),
    "garage": (
        "tinkering at the workbench",
        "pumping up a bicycle tire",
        "loading boxes into the car trunk",
        "sweeping sawdust off the floor",
        "organizing tools on the pegboard",
    ),
    "hallway": (
        "talking on the phone while pacing",
        "carrying a laundry basket through",
        "walking briskly toward the far door",
        "straightening picture frames on the wall",
        "vacuuming the runner rug",
    ),
    "library": (
        "browsing spines along the shelf",
        "reading in the armchair",
        "re-shelving a stack of returned books",
        "taking notes at the study desk",
        "climbing the step stool for a high shelf",
    ),
    "laundry room/mudroom": (
        "loading the washing machine",
        "folding warm clothes from the dryer",
        "scrubbing a stain at the utility sink",
        "hanging damp shirts on the line",
        "kicking off muddy boots",
    ),
    "kitchen": (
        "chopping vegetables at the counter",
        "stirring a pot on the stove",
        "unloading the dishwasher",
        "carrying groceries to the pantry",
        "kneading dough on the island",
    ),
    "living room": (
        "watching television from the couch",
        "doing light stretches on the rug",
        "watering the potted plants",
        "rearranging cushions and throws",
        "walking a slow lap while on a call",
    ),
    "meeting room/conference room": (
        "presenting at the whiteboard",
        "taking notes during a meeting",
        "setting up the projector",
        "handing out printed agendas",
        "wiping the whiteboard clean",
    ),
    "lounge": (
        "sipping coffee in an easy chair",
        "scrolling a tablet on the settee",
        "chatting quietly with a friend",
        "flipping through a magazine",
        "dozing with a blanket",
    ),
    "office": (
        "typing at the desk",
        "filing papers into a cabinet",
        "standing while on a conference call",
        "sketching notes on a legal pad",
        "shredding old documents",
    ),
    "porch/terrace/deck/driveway": (
        "sweeping leaves off the deck",
        "washing the car in the driveway",
        "watering planters along the railing",
        "rocking slowly in the porch chair",
        "shaking out a doormat",
    ),
    "recreation/game room": (
        "playing table tennis",
        "lining up a shot at the pool table",
        "playing a video game standing up",
        "throwing darts at the board",
        "racking billiard balls",
    ),
    "stairs": (
        "carrying groceries upstairs",
        "walking down with a laundry basket",
        "wiping the banister",
        "climbing the steps two at a time",
        "sitting on a step to tie shoelaces",
    ),
    "toilet": (
        "washing hands at the basin",
        "replacing the paper roll",
        "cleaning the sink counter",
        "checking appearance in the mirror",
        "emptying the small bin",
    ),
    "utility room/tool room": (
        "sorting screws into jars",
        "repairing a lamp at the bench",
        "coiling an extension cord",
        "testing a power drill",
        "sharpening a pair of shears",
    ),
    "tv room": (
        "watching a film in the dark",
        "adjusting the sound system",
        "passing snacks along the couch",
        "hunting for the remote between cushions",
        "streaming an exercise video and following along",
    ),
    "workout/gym/exercise room": (
        "jogging on the treadmill",
        "lifting dumbbells in front of the mirror",
        "holding a plank on the mat",
        "jumping rope in place",
        "wiping down equipment between sets",
    ),
    "outdoor areas": (
        "trimming bushes along the path",
        "raking cut grass into piles",
        "walking a dog across the lawn",
        "planting seedlings in a bed",
        "photographing flowers up close",
    ),
    "balcony": (
        "leaning on the railing with a drink",
        "watering balcony planters",
        "having a quiet conversation",
        "shaking out a small rug",
        "reading in the morning sun",
    ),
    "other room": (
        "pacing while thinking aloud",
        "measuring the wall with a tape",
        "assembling a flat-pack shelf",
        "painting a corner of the wall",
        "stacking moving boxes",
    ),
    "bar": (
        "polishing glasses behind the counter",
        "mixing a drink with a shaker",
        "chatting on a bar stool",
        "restocking bottles on the shelf",
        "wiping down the bar top",
    ),
    "classroom": (
        "writing on the chalkboard",
        "handing out worksheets",
        "erasing yesterday's notes",
        "arranging chairs into rows",
        "pinning work to the display board",
    ),
    "dining booth": (
        "sliding into the booth with a tray",
        "sharing a plate of food",
        "wiping the booth table",
        "reading a menu",
        "chatting over coffee refills",
    ),
    "spa/sauna": (
        "toweling off after the sauna",
        "ladling water onto the stones",
        "stretching on a warm bench",
        "folding fresh robes",
        "sipping water between sessions",
    ),
}


@dataclass(frozen=True)
class ActivityEntry:
    id: str
    description: str
    region: str


def _build_catalog() -> tuple[ActivityEntry, ...]:
    entries = []
    for ri, region in enumerate(REGIONS):
        for ai, text in enumerate(_ACTIVITY_TEXT[region]):
            entries.append(ActivityEntry(id=f"act-{ri:02d}-{ai}", description=text, region=region))
    return tuple(entries)


ACTIVITY_CATALOG: tuple[ActivityEntry, ...] = _build_catalog()


def activities_for_region(region: str) -> list[ActivityEntry]:
    return [a for a in ACTIVITY_CATALOG if a.region == region]
