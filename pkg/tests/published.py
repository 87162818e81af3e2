"""Published stream table for the PAP plant: component flows in kmol/h, temperature in deg C."""

COMPONENTS = ("Nitrobenzene", "Hydrogen", "Para-Aminophenol", "Water", "Aniline")

# stream id: (NB, H2, PAP, water, aniline, T)
TABLE = {
    "1": (35.000, 0.000, 0.000, 0.000, 0.000, 25.000),
    "2": (0.000, 93.000, 0.000, 0.000, 0.000, 30.00),
    "3": (35.000, 0.000, 0.000, 0.000, 0.000, 25.100),
    "4": (54.082, 0.000, 0.097, 0.000, 1.558, 47.791),
    "5": (0.006, 166.411, 0.000, 3.504, 0.011, 27.725),
    "6": (0.006, 166.411, 0.000, 3.504, 0.011, 246.765),
    "7": (54.082, 0.000, 0.097, 0.000, 1.558, 85.000),
    "8": (0.006, 166.4, 0.000, 3.504, 0.011, 85.00),
    "9": (21.635, 91.769, 22.815, 45.693, 11.305, 85.000),
    "10": (19.082, 0.000, 0.097, 0.000, 1.558, 85.000),
    "11": (19.082, 0.000, 0.097, 0.000, 1.558, 85.115),
    "12": (21.627, 0.005, 22.815, 41.313, 11.291, 25.000),
    "13": (0.008, 91.76, 0.000, 4.380, 0.014, 25.00),
    "14": (0.002, 18.35, 0.000, 0.876, 0.003, 25.00),
    "15": (0.006, 73.411, 0.000, 3.504, 0.011, 25.00),
    "16": (21.627, 0.005, 22.815, 41.313, 11.291, 120.00),
    "17": (21.612, 0.005, 0.108, 41.313, 11.290, 176.91),
    "18": (0.015, 0.000, 22.707, 0.000, 0.000, 283.48),
    "19": (21.612, 0.005, 0.108, 41.313, 11.290, 120.00),
    "20": (0.410, 0.005, 0.000, 41.313, 9.559, 134.48),
    "21": (21.203, 0.000, 0.108, 0.000, 1.731, 208.95),
    "22": (21.203, 0.000, 0.108, 0.000, 1.731, 85.000),
    "23": (2.120, 0.000, 0.011, 0.000, 0.173, 85.000),
    "24": (0.410, 0.005, 0.000, 41.313, 9.559, 30.000),
    "25": (0.410, 0.005, 0.000, 1.497, 9.558, 30.000),
    "26": (0.000, 0.000, 0.000, 39.816, 0.001, 30.000),
}


def flows(sid):
    return dict(zip(COMPONENTS, TABLE[sid][:5]))


def temperature(sid):
    return TABLE[sid][5]


# Heater duties in cal/s, in the order HE-1..HE-5.
HEATER_DUTIES = {"HE-1": 27760.39, "HE-2": -53583.8, "HE-3": 159599.2, "HE-4": -143220.0, "HE-5": -165063.0}
COMPRESSOR_OUTLET_C = 246.765
COMPRESSOR_POWER_KW = 303.04
