"""Published per-language PAN-X F1 (percent) and averages, frozen as test data."""

PANX_FULL = {
    ("mbert", "vanilla"): {
        "en": 83.83,
        "af": 78.07,
        "ar": 44.09,
        "az": 67.58,
        "bg": 78.31,
        "bn": 70.09,
        "de": 79.1,
        "el": 71.85,
        "es": 73.95,
        "et": 77.96,
        "eu": 65.44,
        "fa": 42.43,
        "fi": 78.74,
        "fr": 80.4,
        "gu": 53.89,
        "he": 55.8,
        "hi": 68.17,
        "hu": 76.16,
        "id": 61.21,
        "it": 81.1,
        "ja": 28.25,
        "jv": 61.58,
        "ka": 67.94,
        "kk": 47.21,
        "ko": 61.6,
        "lt": 74.41,
        "ml": 56.0,
        "mr": 57.77,
        "ms": 67.05,
        "my": 53.36,
        "nl": 82.23,
        "pa": 34.29,
        "pl": 80.74,
        "pt": 79.77,
        "qu": 64.53,
        "ro": 73.97,
        "ru": 65.33,
        "sw": 70.08,
        "ta": 53.33,
        "te": 50.86,
        "th": 0.77,
        "tl": 71.14,
        "tr": 74.66,
        "uk": 71.3,
        "ur": 33.22,
        "vi": 69.69,
        "yo": 49.29,
        "zh": 43.51,
    },
    ("mbert", "pt"): {
        "en": 79.09,
        "af": 71.37,
        "ar": 39.52,
        "az": 63.47,
        "bg": 73.28,
        "bn": 58.81,
        "de": 74.14,
        "el": 63.35,
        "es": 68.05,
        "et": 73.84,
        "eu": 61.0,
        "fa": 34.86,
        "fi": 74.01,
        "fr": 75.02,
        "gu": 32.07,
        "he": 52.0,
        "hi": 62.38,
        "hu": 70.88,
        "id": 58.39,
        "it": 78.11,
        "ja": 23.76,
        "jv": 57.23,
        "ka": 61.45,
        "kk": 46.06,
        "ko": 58.51,
        "lt": 69.86,
        "ml": 50.35,
        "mr": 51.17,
        "ms": 63.17,
        "my": 43.18,
        "nl": 77.78,
        "pa": 31.36,
        "pl": 77.38,
        "pt": 74.0,
        "qu": 46.06,
        "ro": 59.57,
        "ru": 58.14,
        "sw": 60.57,
        "ta": 49.08,
        "te": 47.77,
        "th": 0.54,
        "tl": 71.54,
        "tr": 67.16,
        "uk": 65.2,
        "ur": 26.49,
        "vi": 67.17,
        "yo": 37.71,
        "zh": 40.73,
    },
    ("mbert", "topro"): {
        "en": 92.8,
        "af": 90.87,
        "ar": 62.62,
        "az": 85.3,
        "bg": 89.61,
        "bn": 78.33,
        "de": 92.4,
        "el": 89.88,
        "es": 84.94,
        "et": 90.07,
        "eu": 85.35,
        "fa": 69.52,
        "fi": 91.25,
        "fr": 87.15,
        "gu": 87.22,
        "he": 83.27,
        "hi": 80.88,
        "hu": 90.91,
        "id": 77.99,
        "it": 91.24,
        "ja": 69.29,
        "jv": 80.28,
        "ka": 87.25,
        "kk": 80.95,
        "ko": 83.94,
        "lt": 87.99,
        "ml": 82.57,
        "mr": 82.93,
        "ms": 81.55,
        "my": 82.65,
        "nl": 92.35,
        "pa": 59.67,
        "pl": 90.87,
        "pt": 87.25,
        "qu": 77.5,
        "ro": 81.88,
        "ru": 84.71,
        "sw": 79.33,
        "ta": 77.81,
        "te": 83.83,
        "th": 68.37,
        "tl": 82.54,
        "tr": 87.29,
        "uk": 85.94,
        "ur": 63.18,
        "vi": 86.04,
        "yo": 64.7,
        "zh": 68.39,
    },
    ("xlmr", "vanilla"): {
        "en": 81.31,
        "af": 75.03,
        "ar": 47.26,
        "az": 61.37,
        "bg": 77.02,
        "bn": 68.97,
        "de": 74.07,
        "el": 74.93,
        "es": 70.51,
        "et": 70.73,
        "eu": 58.07,
        "fa": 48.73,
        "fi": 75.44,
        "fr": 75.81,
        "gu": 57.12,
        "he": 51.54,
        "hi": 68.11,
        "hu": 76.42,
        "id": 48.04,
        "it": 77.58,
        "ja": 19.26,
        "jv": 57.86,
        "ka": 67.02,
        "kk": 40.79,
        "ko": 50.36,
        "lt": 73.85,
        "ml": 59.85,
        "mr": 60.74,
        "ms": 66.13,
        "my": 53.41,
        "nl": 79.67,
        "pa": 50.31,
        "pl": 77.64,
        "pt": 76.83,
        "qu": 60.49,
        "ro": 70.45,
        "ru": 62.54,
        "sw": 69.51,
        "ta": 54.62,
        "te": 48.2,
        "th": 3.09,
        "tl": 69.84,
        "tr": 75.58,
        "uk": 73.43,
        "ur": 59.48,
        "vi": 67.92,
        "yo": 50.25,
        "zh": 25.28,
    },
    ("xlmr", "pt"): {
        "en": 75.94,
        "af": 69.92,
        "ar": 43.75,
        "az": 58.57,
        "bg": 72.15,
        "bn": 53.42,
        "de": 68.09,
        "el": 64.12,
        "es": 65.21,
        "et": 65.43,
        "eu": 47.97,
        "fa": 38.65,
        "fi": 70.31,
        "fr": 69.14,
        "gu": 47.54,
        "he": 43.64,
        "hi": 60.58,
        "hu": 70.17,
        "id": 45.33,
        "it": 71.55,
        "ja": 16.98,
        "jv": 41.49,
        "ka": 57.22,
        "kk": 40.66,
        "ko": 44.73,
        "lt": 67.08,
        "ml": 51.08,
        "mr": 48.43,
        "ms": 45.86,
        "my": 44.94,
        "nl": 74.88,
        "pa": 33.83,
        "pl": 73.04,
        "pt": 70.12,
        "qu": 45.36,
        "ro": 59.48,
        "ru": 54.84,
        "sw": 57.57,
        "ta": 47.83,
        "te": 40.89,
        "th": 3.67,
        "tl": 62.14,
        "tr": 64.48,
        "uk": 61.21,
        "ur": 38.17,
        "vi": 61.68,
        "yo": 35.57,
        "zh": 24.51,
    },
    ("xlmr", "topro"): {
        "en": 92.21,
        "af": 90.02,
        "ar": 67.84,
        "az": 84.02,
        "bg": 88.2,
        "bn": 72.06,
        "de": 91.22,
        "el": 91.22,
        "es": 83.63,
        "et": 88.26,
        "eu": 84.59,
        "fa": 62.82,
        "fi": 90.72,
        "fr": 86.2,
        "gu": 88.11,
        "he": 82.49,
        "hi": 79.28,
        "hu": 91.38,
        "id": 69.35,
        "it": 89.36,
        "ja": 66.87,
        "jv": 74.29,
        "ka": 87.5,
        "kk": 83.14,
        "ko": 81.78,
        "lt": 88.09,
        "ml": 85.55,
        "mr": 81.75,
        "ms": 74.39,
        "my": 85.1,
        "nl": 92.0,
        "pa": 69.72,
        "pl": 90.66,
        "pt": 85.99,
        "qu": 77.57,
        "ro": 83.6,
        "ru": 80.65,
        "sw": 77.32,
        "ta": 81.3,
        "te": 84.73,
        "th": 19.56,
        "tl": 78.35,
        "tr": 89.35,
        "uk": 85.74,
        "ur": 61.11,
        "vi": 82.18,
        "yo": 66.38,
        "zh": 66.09,
    },
    ("mt5", "vanilla"): {
        "en": 77.14,
        "af": 76.94,
        "ar": 49.99,
        "az": 62.0,
        "bg": 72.98,
        "bn": 60.32,
        "de": 76.19,
        "el": 76.88,
        "es": 67.81,
        "et": 74.25,
        "eu": 67.12,
        "fa": 40.46,
        "fi": 75.93,
        "fr": 73.68,
        "gu": 64.18,
        "he": 68.83,
        "hi": 61.9,
        "hu": 74.01,
        "id": 64.28,
        "it": 77.33,
        "ja": 46.19,
        "jv": 67.79,
        "ka": 70.17,
        "kk": 65.1,
        "ko": 60.24,
        "lt": 72.09,
        "ml": 62.21,
        "mr": 61.71,
        "ms": 68.06,
        "my": 44.7,
        "nl": 77.43,
        "pa": 53.71,
        "pl": 75.31,
        "pt": 70.83,
        "qu": 62.18,
        "ro": 69.1,
        "ru": 66.16,
        "sw": 66.6,
        "ta": 62.69,
        "te": 66.67,
        "th": 29.23,
        "tl": 63.28,
        "tr": 69.28,
        "uk": 69.94,
        "ur": 37.75,
        "vi": 61.28,
        "yo": 61.24,
        "zh": 50.87,
    },
    ("mt5", "topro"): {
        "en": 96.52,
        "af": 96.76,
        "ar": 89.13,
        "az": 94.78,
        "bg": 96.11,
        "bn": 90.74,
        "de": 97.21,
        "el": 96.22,
        "es": 93.9,
        "et": 95.8,
        "eu": 94.62,
        "fa": 87.93,
        "fi": 96.71,
        "fr": 94.55,
        "gu": 96.17,
        "he": 92.93,
        "hi": 92.69,
        "hu": 96.98,
        "id": 91.22,
        "it": 96.35,
        "ja": 89.71,
        "jv": 90.59,
        "ka": 96.02,
        "kk": 93.73,
        "ko": 93.4,
        "lt": 95.57,
        "ml": 94.77,
        "mr": 93.42,
        "ms": 85.7,
        "my": 93.66,
        "nl": 96.93,
        "pa": 86.18,
        "pl": 96.34,
        "pt": 94.81,
        "qu": 87.35,
        "ro": 94.16,
        "ru": 94.07,
        "sw": 91.9,
        "ta": 92.52,
        "te": 94.82,
        "th": 79.33,
        "tl": 90.34,
        "tr": 96.21,
        "uk": 93.45,
        "ur": 89.06,
        "vi": 92.94,
        "yo": 84.54,
        "zh": 90.37,
    },
}

PANX_PUBLISHED_AVG = {
    ("mbert", "vanilla"): 62.73,
    ("mbert", "pt"): 56.76,
    ("mbert", "topro"): 81.91,
    ("xlmr", "vanilla"): 61.3,
    ("xlmr", "pt"): 53.05,
    ("xlmr", "topro"): 80.03,
    ("mt5", "vanilla"): 64.19,
    ("mt5", "topro"): 92.82,
}

# zero-shot ICL on PAN-X: language -> (bloomz-7b1, mt0-xxl)
ICL_PANX = {
    "af": (9.71, 15.97),
    "ar": (20.63, 19.37),
    "az": (10.0, 17.25),
    "bg": (11.66, 20.23),
    "bn": (23.27, 26.68),
    "de": (10.96, 15.32),
    "el": (8.7, 14.11),
    "es": (17.2, 20.7),
    "et": (12.16, 18.12),
    "eu": (11.26, 17.86),
    "fa": (19.51, 20.08),
    "fi": (11.77, 19.19),
    "fr": (20.55, 20.11),
    "gu": (6.09, 13.33),
    "he": (10.01, 16.85),
    "hi": (17.98, 23.1),
    "hu": (11.57, 17.57),
    "id": (16.85, 21.13),
    "it": (16.5, 17.74),
    "ja": (7.58, 4.79),
    "jv": (13.66, 18.11),
    "ka": (8.11, 18.23),
    "kk": (9.95, 18.9),
    "ko": (11.32, 19.1),
    "lt": (13.48, 17.81),
    "ml": (13.37, 22.53),
    "mr": (14.53, 19.92),
    "ms": (22.08, 19.1),
    "my": (3.37, 18.59),
    "nl": (14.8, 17.7),
    "pa": (12.74, 17.14),
    "pl": (14.04, 17.89),
    "pt": (19.35, 20.46),
    "qu": (16.5, 17.49),
    "ro": (21.19, 20.18),
    "ru": (12.48, 18.36),
    "sw": (17.02, 23.72),
    "ta": (13.06, 19.52),
    "te": (11.82, 17.15),
    "th": (7.65, 0.57),
    "tl": (25.1, 22.2),
    "tr": (13.62, 19.53),
    "uk": (11.74, 19.69),
    "ur": (18.63, 22.24),
    "vi": (16.86, 17.05),
    "yo": (19.73, 22.21),
    "zh": (6.86, 5.25),
}

ICL_PUBLISHED_AVG = {"bloomz-7b1": 13.98, "mt0-xxl": 18.09}

# headline averages of the overview table
OVERVIEW_PANX = {
    ("mbert", "vanilla"): 62.73,
    ("mbert", "pt"): 56.76,
    ("mbert", "topro"): 81.91,
    ("xlmr", "vanilla"): 61.30,
    ("xlmr", "pt"): 53.05,
    ("xlmr", "topro"): 80.03,
    ("mt5", "vanilla"): 64.19,
    ("mt5", "topro"): 92.82,
}
