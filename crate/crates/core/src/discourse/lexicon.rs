//! Bundled word lists: sentiment valences on a -4..4 scale, negators,
//! boosters, and topic keywords.

pub(crate) static VALENCE: &[(&str, f64)] = &[
    ("amazing", 2.8),
    ("awesome", 3.1),
    ("beautiful", 2.9),
    ("best", 3.2),
    ("better", 1.9),
    ("blessed", 2.5),
    ("brilliant", 2.8),
    ("calm", 1.3),
    ("charming", 2.0),
    ("cheerful", 2.5),
    ("chill", 1.2),
    ("clean", 1.7),
    ("clever", 2.0),
    ("clutch", 1.8),
    ("comfy", 1.6),
    ("cool", 1.3),
    ("cozy", 1.9),
    ("creative", 1.9),
    ("cute", 2.0),
    ("delicious", 2.7),
    ("delight", 2.9),
    ("enjoy", 2.2),
    ("enjoyed", 2.3),
    ("entertaining", 2.1),
    ("epic", 2.2),
    ("excellent", 2.7),
    ("excited", 2.0),
    ("exciting", 2.2),
    ("fantastic", 2.6),
    ("favorite", 2.0),
    ("favourite", 2.0),
    ("fire", 1.4),
    ("fun", 2.3),
    ("funny", 1.9),
    ("gg", 1.5),
    ("glad", 2.0),
    ("goat", 2.2),
    ("good", 1.9),
    ("gorgeous", 3.0),
    ("great", 3.1),
    ("happy", 2.7),
    ("helpful", 1.8),
    ("hilarious", 1.7),
    ("hype", 1.6),
    ("impressive", 2.3),
    ("incredible", 2.5),
    ("insane", 1.0),
    ("inspiring", 2.2),
    ("joy", 2.8),
    ("kind", 2.4),
    ("laugh", 2.2),
    ("legend", 2.1),
    ("legendary", 2.3),
    ("like", 1.5),
    ("liked", 1.8),
    ("lit", 1.3),
    ("lol", 1.8),
    ("love", 3.2),
    ("loved", 2.9),
    ("lovely", 2.8),
    ("loving", 2.9),
    ("lucky", 1.8),
    ("masterpiece", 3.0),
    ("nice", 1.8),
    ("perfect", 2.7),
    ("pleasant", 2.2),
    ("pog", 1.9),
    ("poggers", 2.0),
    ("pretty", 1.7),
    ("proud", 2.1),
    ("relaxing", 1.9),
    ("respect", 2.1),
    ("satisfying", 2.0),
    ("skilled", 1.9),
    ("smart", 1.7),
    ("smooth", 1.5),
    ("solid", 1.3),
    ("strong", 1.6),
    ("support", 1.7),
    ("sweet", 2.0),
    ("talented", 2.3),
    ("thank", 1.5),
    ("thanks", 1.9),
    ("top", 1.5),
    ("unreal", 1.4),
    ("useful", 1.9),
    ("wholesome", 2.4),
    ("win", 2.8),
    ("wins", 2.7),
    ("won", 2.7),
    ("wonderful", 2.7),
    ("wow", 2.8),
    ("yay", 2.4),
    ("yes", 1.7),
    ("adorable", 2.2),
    ("glorious", 2.6),
    ("brave", 2.4),
    ("fair", 1.3),
    ("welcome", 2.0),
    ("wise", 1.8),
    ("angry", -2.3),
    ("annoying", -1.9),
    ("annoyed", -1.6),
    ("awful", -2.0),
    ("awkward", -1.3),
    ("bad", -2.5),
    ("boring", -1.3),
    ("broken", -1.7),
    ("bug", -0.8),
    ("buggy", -1.5),
    ("cheat", -2.0),
    ("cheater", -2.4),
    ("cheating", -2.6),
    ("clown", -1.3),
    ("confused", -1.3),
    ("cringe", -1.9),
    ("cringy", -1.9),
    ("cry", -2.1),
    ("dead", -3.3),
    ("disappointed", -1.9),
    ("disappointing", -2.2),
    ("disgusting", -2.4),
    ("dislike", -1.6),
    ("dumb", -2.3),
    ("fail", -2.5),
    ("failed", -2.3),
    ("fake", -2.1),
    ("garbage", -2.0),
    ("gross", -2.1),
    ("hate", -2.7),
    ("hated", -3.2),
    ("horrible", -2.5),
    ("idiot", -2.3),
    ("lag", -1.2),
    ("laggy", -1.5),
    ("lame", -1.8),
    ("loser", -2.4),
    ("lose", -1.7),
    ("losing", -1.6),
    ("lost", -1.3),
    ("mad", -2.2),
    ("mean", -1.2),
    ("mess", -1.5),
    ("messy", -1.5),
    ("mid", -0.8),
    ("miss", -0.6),
    ("missed", -1.2),
    ("noob", -1.3),
    ("overrated", -1.5),
    ("pathetic", -2.3),
    ("poor", -2.1),
    ("rage", -2.6),
    ("ruined", -2.4),
    ("sad", -2.1),
    ("scam", -2.3),
    ("scared", -1.9),
    ("shame", -2.1),
    ("sick", -2.1),
    ("slow", -0.9),
    ("sorry", -0.3),
    ("stupid", -2.4),
    ("sucks", -1.5),
    ("terrible", -2.1),
    ("throw", -0.8),
    ("throwing", -1.1),
    ("tilted", -1.4),
    ("tired", -1.5),
    ("toxic", -2.5),
    ("trash", -1.7),
    ("ugly", -2.3),
    ("unfair", -2.1),
    ("unfunny", -1.9),
    ("upset", -1.6),
    ("useless", -1.8),
    ("weak", -1.9),
    ("weird", -0.7),
    ("worse", -2.1),
    ("worst", -3.1),
    ("wrong", -2.1),
    ("yikes", -1.4),
    ("ew", -1.5),
    ("meh", -0.8),
    ("nah", -0.4),
    ("bored", -1.1),
    ("painful", -1.9),
    ("problem", -1.7),
    ("sketchy", -1.4),
    ("unplayable", -2.2),
    ("greedy", -1.3),
    ("creepy", -1.9),
    ("rude", -2.0),
    ("fraud", -2.8),
    ("worthless", -1.9),
];

pub(crate) static NEGATORS: &[&str] = &[
    "ain't", "aint", "aren't", "arent", "can't", "cannot", "cant", "couldn't", "couldnt", "didn't", "didnt",
    "doesn't", "doesnt", "don't", "dont", "hasn't", "haven't", "isn't", "isnt", "neither", "never", "no",
    "nobody", "none", "nor", "not", "nothing", "nowhere", "shouldn't", "wasn't", "wasnt", "weren't", "without",
    "won't", "wont", "wouldn't", "wouldnt",
];

pub(crate) static BOOSTERS_UP: &[&str] = &[
    "absolutely", "completely", "especially", "extremely", "hella", "highly", "incredibly", "literally",
    "most", "really", "so", "soo", "sooo", "such", "super", "totally", "truly", "very", "way",
];

pub(crate) static BOOSTERS_DOWN: &[&str] = &[
    "barely", "hardly", "kinda", "kindof", "marginally", "partly", "slightly", "somewhat", "sorta",
];

pub(crate) static TOPIC_KEYWORDS: &[(&str, &str)] = &[
    ("gameplay", "ace"),
    ("gameplay", "agent"),
    ("gameplay", "aim"),
    ("gameplay", "ability"),
    ("gameplay", "build"),
    ("gameplay", "chase"),
    ("gameplay", "combo"),
    ("gameplay", "crafting"),
    ("gameplay", "crosshair"),
    ("gameplay", "flick"),
    ("gameplay", "fishing"),
    ("gameplay", "gameplay"),
    ("gameplay", "gen"),
    ("gameplay", "gens"),
    ("gameplay", "headshot"),
    ("gameplay", "hook"),
    ("gameplay", "island"),
    ("gameplay", "killer"),
    ("gameplay", "loop"),
    ("gameplay", "map"),
    ("gameplay", "match"),
    ("gameplay", "mechanics"),
    ("gameplay", "perk"),
    ("gameplay", "perks"),
    ("gameplay", "play"),
    ("gameplay", "plays"),
    ("gameplay", "rank"),
    ("gameplay", "ranked"),
    ("gameplay", "round"),
    ("gameplay", "skill"),
    ("gameplay", "spray"),
    ("gameplay", "strat"),
    ("gameplay", "strategy"),
    ("gameplay", "survivor"),
    ("gameplay", "turnip"),
    ("gameplay", "turnips"),
    ("gameplay", "villager"),
    ("gameplay", "villagers"),
    ("environment", "audio"),
    ("environment", "background"),
    ("environment", "cam"),
    ("environment", "camera"),
    ("environment", "chair"),
    ("environment", "decor"),
    ("environment", "desk"),
    ("environment", "headset"),
    ("environment", "keyboard"),
    ("environment", "lighting"),
    ("environment", "lights"),
    ("environment", "mic"),
    ("environment", "microphone"),
    ("environment", "monitor"),
    ("environment", "overlay"),
    ("environment", "plants"),
    ("environment", "rgb"),
    ("environment", "room"),
    ("environment", "setup"),
    ("environment", "studio"),
    ("environment", "webcam"),
    ("food", "boba"),
    ("food", "breakfast"),
    ("food", "candy"),
    ("food", "chips"),
    ("food", "coffee"),
    ("food", "cookie"),
    ("food", "cookies"),
    ("food", "dinner"),
    ("food", "drink"),
    ("food", "eat"),
    ("food", "eating"),
    ("food", "food"),
    ("food", "hungry"),
    ("food", "lunch"),
    ("food", "noodles"),
    ("food", "pizza"),
    ("food", "ramen"),
    ("food", "snack"),
    ("food", "snacks"),
    ("food", "soda"),
    ("food", "tea"),
    ("appearance", "dress"),
    ("appearance", "earrings"),
    ("appearance", "eyes"),
    ("appearance", "face"),
    ("appearance", "glasses"),
    ("appearance", "hair"),
    ("appearance", "haircut"),
    ("appearance", "handsome"),
    ("appearance", "hoodie"),
    ("appearance", "look"),
    ("appearance", "looks"),
    ("appearance", "makeup"),
    ("appearance", "nails"),
    ("appearance", "outfit"),
    ("appearance", "shirt"),
    ("appearance", "smile"),
    ("appearance", "style"),
    ("appearance", "voice"),
];
