"""Reference numbers for the bundled corpus, typed in by hand.

Every value is at the printed precision (one decimal, percentages to one
decimal).  Group order: All, Cognitive, Visual, Motor.
"""

PARAMS = ("potn", "thresh", "igmax", "igfat", "p50", "igtig", "igtex", "d50")

GROUP_COUNTS = {"All": 48, "Cognitive": 18, "Visual": 16, "Motor": 14}

GROUP_MEANS = {
    "All": (11.1, 3.3, 6.8, 5.7, 4.5, 4.7, 5.4, 5.5),
    "Cognitive": (10.4, 2.8, 6.6, 5.2, 3.8, 4.1, 5.0, 5.2),
    "Visual": (14.4, 5.0, 8.6, 7.5, 4.5, 4.7, 5.3, 5.4),
    "Motor": (9.5, 2.6, 5.9, 4.9, 5.3, 5.4, 6.1, 6.2),
}

TIMING = {
    "All": (0.0, 0.4, 1.1, 1.3),
    "Cognitive": (0.0, 0.6, 1.5, 1.9),
    "Visual": (0.0, 0.4, 1.0, 1.2),
    "Motor": (0.0, 0.2, 0.9, 1.1),
}

# (numerator, denominator) -> percent
RATIOS = {
    "potn": {("Visual", "All"): 29.7, ("Visual", "Cognitive"): 38.5, ("Visual", "Motor"): 51.6,
             ("Cognitive", "All"): -6.4, ("Cognitive", "Motor"): 9.5, ("Motor", "All"): -14.4},
    "thresh": {("Visual", "All"): 51.6, ("Visual", "Cognitive"): 78.6, ("Visual", "Motor"): 92.3,
               ("Cognitive", "All"): -15.1, ("Cognitive", "Motor"): 7.7, ("Motor", "All"): -21.2},
    "igmax": {("Visual", "All"): 26.5, ("Visual", "Cognitive"): 30.3, ("Visual", "Motor"): 45.8,
              ("Cognitive", "All"): -2.9, ("Cognitive", "Motor"): 1.1, ("Motor", "All"): -13.2},
}
RATIO_TOLERANCE_PP = 0.2

# group -> (mean fatigue K, mean igmax K, fatigue %)
FATIGUE = {
    "All": (1.1, 6.8, 16.2),
    "Cognitive": (1.4, 6.6, 21.2),
    "Visual": (1.1, 8.6, 12.8),
    "Motor": (1.0, 5.9, 17.0),
}

# excitatory links, source type -> target type
IO_MATRIX = {
    ("V", "V"): 0, ("V", "C"): 21, ("V", "M"): 1,
    ("C", "V"): 20, ("C", "C"): 26, ("C", "M"): 17,
    ("M", "V"): 3, ("M", "C"): 1, ("M", "M"): 0,
}
IO_TOTAL = 89
IO_CELL_TOLERANCE = 2
IO_TOTAL_TOLERANCE = 4

STILL_IGNITED_AT_END = ("CRHH", "MRHH", "CS", "VS", "CMKT", "MHKT", "VK", "TLHTS", "CFK", "MPTSU")

CHECKPOINTS = (("MRHH", 4.1), ("MPTSU", 9.0))
CHECKPOINT_TOLERANCE = 0.05

TYPE_CENSUS = {"Cognitive": 22, "Visual": 20, "Touch": 3, "Kinaesthetic": 2, "Motor": 17}

# the full parameter table: seq, id, 8 parameters, acronym (tab separated)
PARAM_TABLE = """\
01	CKEC	10	2	7	6	-1.0	0.0	0.4	0.5	COG Kitchen Entrance Check
02	VKEG	20	10	15	14	-0.8	0.1	0.3	0.4	VIS Kitchen Entrance General
03	CMC	5	1	2	1.5	-1.0	0.4	2.5	4.0	COG Make Coffee
04	CAHWA	10	2	5	3	0.5	0.6	3.1	3.2	COG Approaching Hot Water Area
05	VAHWA	20	2	10	6	0.6	0.7	2.5	2.6	VIS Approaching Hot Water Area
06	MSHWA	10	2	7	6	0.6	0.7	3.0	3.1	MOT Stride to Hot Water Area
07	CKHWA	10	3	7	6	0.8	1.0	2.1	2.2	COG Kettle Hot Water Area
08	VKHWA	20	5	10	9	1.2	1.3	2.0	2.1	VIS Kettle Hot Water Area
09	CKH	5	1	3	2	1.5	1.6	3.5	3.6	COG Kettle Handle
10	VKH	10	3	7	6	1.6	1.8	3.3	3.4	VIS Kettle Handle
11	MRAB	5	1	2	2	1.9	2.0	2.1	2.2	MOT Right Arm Ballistic
12	VRH	15	2	5	4	2.0	2.1	3.2	3.3	VIS Right hand
13	CRH	12	3	7	6	2.1	2.2	3.4	3.5	COG Right hand
14	CHWA	15	5	10	8	2.2	2.4	3.5	3.7	COG Hot water Area
15	CRHA	25	5	15	12	2.3	2.5	3.6	3.7	COG Right Hand Approach
16	VRHA	25	10	15	14	2.3	2.6	3.3	3.4	VIS Right Hand Approach
17	MRHA	10	2	7	6	2.4	2.7	3.7	3.8	MOT Right Hand Approach
18	TRHKH	5	2	3	2	3.0	3.5	3.8	3.9	TOU Right Hand to Kettle Handle
19	CRHG	5	2	3	2	3.2	3.7	3.8	4.2	COG Right Hand Grip
20	MRHG	5	1	3	2	3.7	3.8	3.9	4.0	MOT Right Hand Grip
21	TRHG	5	1	3	2	3.7	3.8	3.9	4.3	TOU Right Hand Grip
22	CRHH	10	2	5	5	3.8	4.0	-	-	COG Right Hand Hold
23	MRHH	10	2	3	3	3.9	4.1	-	-	MOT Right Hand Hold
24	CLK	10	3	6	5	4.0	4.2	4.7	4.8	COG Lift Kettle
25	MLK	5	1	3	2	4.1	4.3	4.4	4.5	MOT Lift Kettle
26	KKW	5	1	3	3	4.2	4.4	4.5	4.6	KIN Kettle Weight
27	VLK	10	3	6	5	4.3	4.5	4.6	4.7	VIS Lift Kettle
28	CD	15	5	8	6	4.5	4.6	6.0	6.1	COG Drainer
29	VD	25	8	15	13	4.6	4.7	5.5	5.8	VIS Drainer
30	CMKS	25	5	15	12	4.7	4.8	6.6	6.7	COG Move Kettle Sink
31	VMKS	15	5	10	9	4.8	4.9	6.5	6.6	VIS Move Kettle Sink
32	MMKS	20	5	10	9	4.9	5.0	6.5	6.6	MOT Move Kettle Sink
33	MLHTKL	15	3	9	6	5.0	5.1	7.0	7.0	MOT Left Hand Track Kettle Lid
34	KLHTKL	10	2	6	5	5.1	5.2	7.8	7.8	KIN Left Hand Track Kettle Lid
35	MSBS	10	5	7	6	5.1	5.3	6.9	7.0	MOT Shuffle Body Sink
36	CS	5	2	4	3	6.5	6.7	-	-	COG Sink
37	VS	10	5	7	6	6.6	6.8	-	-	VIS Sink
38	CLHRKL	5	1	4	3	6.8	6.9	7.2	7.3	COG Left Hand Remove Kettle Lid
39	VKL	10	5	7	6	6.9	7.0	7.1	7.2	VIS Kettle Lid
40	VLH	10	5	7	6	6.9	7.0	7.1	7.2	VIS Left Hand
41	MLHRKL	7	2	6	5	7.0	7.1	7.7	7.7	MOT Left Hand Remove Kettle Lid
42	VKWL	10	5	7	6	7.1	7.2	7.3	7.4	VIS Kettle Without Lid
43	CEK	5	1	4	3	7.1	7.2	7.4	7.5	COG Empty Kettle
44	MRHIK	3	1	2	2	7.2	7.3	7.4	7.4	MOT Right Hand Invert Kettle
45	VKE	10	3	5	5	7.3	7.4	7.5	7.6	VIS Kettle Empty
46	CKE	3	1	2	2	7.4	7.5	7.6	7.6	COG Kettle Empty
47	CRHOK	5	1	4	3	7.5	7.6	7.8	7.9	COG Right Hand Orientate Kettle
48	VRHOK	10	5	7	6	7.5	7.6	7.9	8.0	VIS Right Hand Orientate Kettle
49	MRHOK	3	1	2	2	7.6	7.7	7.8	7.9	MOT Right Hand Orientate Kettle
50	CRKLLH	8	3	6	5	7.8	7.9	8.2	8.3	COG Replace Kettle Lid Left Hand
51	VRKLLH	10	5	7	6	7.8	7.9	8.2	8.3	VIS Replace Kettle Lid Left Hand
52	MRKLLH	10	3	7	6	7.9	8.0	8.1	8.2	MOT Remove Kettle Lid Left Hand
53	CMKT	15	5	10	9	8.1	8.2	-	-	COG Move Kettle Tap
54	VT	10	3	5	5	8.2	8.3	8.6	8.7	VIS Tap
55	VK	15	5	8	7	8.2	8.3	-	-	VIS Kettle
56	MMKT	15	5	10	8	8.3	8.4	8.6	8.6	MOT Move Kettle Tap
57	MHKT	6	1	3	3	8.4	8.5	-	-	MOT Hold Kettle Tap
58	CMLHTS	15	7	10	8	8.3	8.5	8.9	9.0	COG Move Left Hand Tap Switch
59	VLHTS	20	5	10	7	8.5	8.6	-	-	VIS Left Hand to Tap Switch
60	VTS	10	5	7	6	8.6	8.7	-	-	VIS Tap Switch
61	MMLHTS	15	5	8	7	8.7	8.7	8.9	9.0	MOT Move Left Hand Tap Switch
62	TLHTS	8	2	6	5	8.7	8.8	-	-	TOU Left Hand Tap Switch
63	CFK	10	3	7	6	8.8	8.9	-	-	COG Fill Kettle
64	MPTSU	5	1	3	3	8.9	9.0	-	-	MOT Pull Tap Switch Up
"""


def param_rows():
    out = {}
    for line in PARAM_TABLE.strip("\n").split("\n"):
        seq, ca_id, *vals, acronym = line.split("\t")
        nums = tuple(None if v == "-" else float(v) for v in vals)
        out[ca_id] = (int(seq), nums, acronym)
    return out
