"""Published benchmark reference values used by the acceptance suite.

`SMAPE_GRID` transcribes the per-dataset sMAPE scores of the nine classical
methods over the 38-dataset benchmark run, with "na" marking model failures
and "timeout" marking runs that exceeded the 3600 s budget. The win/loss
and group-summary acceptance checks feed this grid through the toolkit's
reporting operations.
"""

from __future__ import annotations

NA = "na"
TIMEOUT = "timeout"

METHODS = (
    "naive",
    "stl",
    "theta",
    "trend",
    "poly_trend",
    "auto_arima",
    "exp_smoothing",
    "auto_ets",
    "prophet",
)

# dataset -> one entry per method, in METHODS order
SMAPE_GRID: dict[str, tuple] = {
    "m1_yearly": (0.2243, NA, 0.1922, 0.2133, 0.2133, 0.1724, 0.2311, 0.1917, 0.1971),
    "m1_quarterly": (0.1894, 0.1776, 0.1568, 0.1822, 0.1822, 0.1843, 0.1805, 0.1826, 0.1908),
    "m1_monthly": (0.1731, 0.1867, 0.1622, 0.2175, 0.2175, 0.1674, 0.1746, 0.1818, 0.2001),
    "m3_yearly": (0.1788, NA, 0.1673, 0.2292, 0.2292, 0.1706, 0.1779, 0.1619, 0.2217),
    "m3_quarterly": (0.1107, 0.0998, 0.0914, 0.1445, 0.1445, 0.1185, 0.1082, 0.1104, 0.1367),
    "m3_monthly": (0.1724, 0.1671, 0.1442, 0.207, 0.207, 0.1737, 0.162, 0.1658, 0.2073),
    "m4_yearly": (0.1634, NA, 0.1436, 0.2183, 0.2183, TIMEOUT, 0.1638, 0.1397, TIMEOUT),
    "m4_quarterly": (0.1252, 0.114, 0.1034, 0.1883, 0.1883, TIMEOUT, 0.1109, 0.11, TIMEOUT),
    "m4_monthly": (0.1599, TIMEOUT, 0.128, 0.2451, 0.2451, TIMEOUT, 0.1437, TIMEOUT, TIMEOUT),
    "m4_weekly": (0.0916, NA, 0.0911, 0.2989, 0.2989, 0.1025, 0.0901, 0.0871, 0.2021),
    "m4_daily": (0.0374, 0.0364, 0.0307, 0.201, 0.201, TIMEOUT, 0.0304, 0.0302, TIMEOUT),
    "m4_hourly": (0.1391, 0.231, 0.1814, 0.3316, 0.3316, TIMEOUT, 0.4295, 0.4228, 0.1808),
    "tourism_yearly": (0.4217, NA, 0.3343, 0.2889, 0.2889, 0.3144, 0.3554, 0.348, 0.2884),
    "tourism_quarterly": (0.1661, 0.1496, NA, 0.3183, 0.3183, 0.1664, 0.2737, 0.2822, 0.2353),
    "tourism_monthly": (0.2167, 0.1957, NA, 0.3695, 0.3695, 0.2127, 0.3627, 0.3739, 0.2682),
    "nn5_daily": (0.2647, 0.275, NA, 0.3594, 0.3594, 0.2244, 0.355, 0.3561, 0.2171),
    "nn5_weekly": (0.1327, NA, 0.1203, 0.115, 0.115, 0.1312, 0.1224, 0.121, 0.112),
    "solar_weekly": (0.328, NA, 0.2494, 0.411, 0.411, 0.2563, 0.2475, 0.2036, 0.4106),
    "traffic_weekly": (0.1307, NA, NA, 0.1501, 0.1501, 0.1515, 0.1249, 0.1265, 0.148),
    "electricity_weekly": (0.1414, NA, NA, 0.1606, 0.1606, 0.1493, 0.144, 0.1417, 0.104),
    "bitcoin": (0.2206, 0.3273, 0.302, 0.5278, 0.5278, 0.2312, 0.2071, 0.2067, 0.4411),
    "melbourne_pedestrian_counts": (0.5146, 0.7413, NA, 1.3374, 1.3374, TIMEOUT, 1.2397, 1.2404, 1.2874),
    "traffic_hourly": (0.3484, 0.576, NA, 0.714, 0.714, TIMEOUT, 0.7207, 0.7235, TIMEOUT),
    "electricity_hourly": (0.2242, 0.2366, NA, 0.419, 0.419, TIMEOUT, 0.4438, 0.4441, TIMEOUT),
    "car_parts": (0.6204, 1.8299, NA, 1.7977, 1.7978, NA, 1.7606, 1.7723, 1.8119),
    "fred_md": (0.1459, 0.1206, NA, 0.2722, 0.2722, 0.1069, 0.1065, 0.1028, 0.3026),
    "hospital": (0.2103, 0.2132, 0.1805, 0.1917, 0.1917, 0.2349, 0.1803, 0.1882, 0.1935),
    "covid_19_deaths": (0.1863, 0.1645, NA, 0.4037, 0.4037, 0.0942, 0.1622, 0.0947, 0.1768),
    "sunspot_daily": (1.9833, 1.9802, NA, 1.9971, 1.9971, TIMEOUT, 1.962, 1.9618, 1.9918),
    "us_births": (0.045, 0.0513, 0.0582, 0.1219, 0.1219, 0.0512, 0.118, 0.122, 0.0623),
    "saugeen_river_flow": (0.6695, 0.6151, 0.3604, 0.3706, 0.3706, 0.3736, 0.3603, 0.3579, 0.3795),
    "wind_power": (NA, NA, NA, NA, NA, NA, NA, NA, NA),
    "london_smart_meters": (NA, NA, NA, NA, NA, NA, NA, NA, NA),
    "wind_farms": (0.4305, NA, NA, 1.3317, 1.3317, TIMEOUT, 0.5239, TIMEOUT, TIMEOUT),
    "vehicle_trips": (0.3287, 0.387, 0.3033, 0.4267, 0.4267, 0.3843, 0.3686, 0.3988, 0.367),
    "rideshare": (1.5189, 1.9635, NA, 2.0, 2.0, TIMEOUT, 1.6525, 1.6527, 1.9985),
    "temperature_rain": (0.966, 1.6073, NA, 1.464, 1.464, TIMEOUT, 1.5118, 1.5131, TIMEOUT),
    "kdd_cup": (0.6273, 0.5847, NA, 0.6115, 0.6115, TIMEOUT, 0.622, 0.6257, 0.5071),
}

# reference win/loss rows the grid must reproduce exactly
EXPECTED_WINS_LOSSES = {
    "naive": (9, 27, 0, 0),
    "theta": (7, 13, 0, 16),
    "trend": (0, 36, 0, 0),
}

# frequency-group summary reference for the naive column (mean, sample std)
NAIVE_YEARLY_GROUP = (0.2471, 0.1192)

# reference per-dataset scores for the deterministic reproduction checks
REFERENCE_SCORES = {
    ("m1_yearly", "naive", "smape"): (0.2243, 0.003),
    ("m1_yearly", "naive", "mase"): (4.8943, 0.02),
    ("us_births", "naive", "smape"): (0.045, 0.003),
    ("nn5_weekly", "naive", "mase"): (1.0628, 0.05),
    ("m3_quarterly", "exp_smoothing", "smape"): (0.1082, 0.15 * 0.1082),
    ("m3_monthly", "theta", "smape"): (0.1442, 0.15 * 0.1442),
}
