"""Writes the seven-day household schedule used by the end-to-end tests."""

import sys

# (start "HH:MM[:SS]", minutes, room, basic, appliances)
BASE = [
    ("00:00", 390, "bedroom", "lie", ""),
    ("06:30", 10, "bathroom", "stand", "bathroom_switch"),
    ("06:40", 10, "bedroom", "stand", "mirror_bulb"),
    ("06:50", 10, "kitchen", "walk", ""),
    ("07:00", 10, "kitchen", "sit", ""),
    ("07:10", 0.5, "kitchen", "stand", "water_bottle"),
    ("07:10:30", 19.5, "kitchen", "sit", ""),
    ("07:30", 2, "stairs", "stairDown", ""),
    ("07:32", 28, "hall", "sit", "tv"),
    ("08:00", 20, "worship", "stand", ""),
    ("08:20", 20, "worship", "sit", ""),
    ("08:40", 0.5, "hall", "stand", "water_bottle"),
    ("08:40:30", 39.5, "outside", "walk", ""),
    ("09:20", 10, "hall", "sit", ""),
    ("09:30", 0.5, "kitchen", "stand", "water_bottle"),
    ("09:30:30", 29.5, "kitchen", "stand", ""),
    ("10:00", 20, "hall", "stand", "tv"),
    ("10:20", 0.5, "hall", "sit", "water_bottle"),
    ("10:20:30", 99.5, "hall", "sit", ""),
    ("12:00", 30, "kitchen", "stand", ""),
    ("12:30", 30, "kitchen", "sit", ""),
    ("13:00", 60, "bedroom", "lie", ""),
    ("14:00", 2, "stairs", "stairUp", ""),
    ("14:02", 58, "bedroom", "sit", ""),
    ("15:00", 60, "hall", "sit", "tv"),
    ("16:00", 60, "outside", "walk", ""),
    ("17:00", 30, "worship", "sit", ""),
    ("17:30", 30, "kitchen", "stand", ""),
    ("18:00", 60, "kitchen", "sit", ""),
    ("19:00", 90, "hall", "sit", "tv"),
    ("20:30", 10, "bathroom", "sit", "bathroom_switch"),
    ("20:40", 10, "bedroom", "stand", "mirror_bulb"),
    ("20:50", 40, "bedroom", "sit", ""),
    ("21:30", 150, "bedroom", "lie", ""),
]


def variant(day, row):
    start, minutes, room, basic, apps = row
    # morning walk only on some days; otherwise sitting in the hall
    if start == "08:40:30" and day in (2, 4, 6):
        return (start, minutes, "hall", "sit", "")
    # jogging outside on two mornings instead of standing with the tv
    if start == "10:00" and day in (2, 5):
        return (start, minutes, "outside", "jog", "")
    # a nap in the kitchen (sleeping in kitchen, anomaly)
    if start == "13:00" and day == 3:
        return (start, 30, "kitchen", "lie", "")
    # jogging in the kitchen (unnatural)
    if start == "12:00" and day == 6:
        return (start, minutes, "kitchen", "jog", "")
    return row


def rows(days):
    for day in range(days):
        for row in BASE:
            start, minutes, room, basic, apps = variant(day, row)
            if day == 3 and start == "13:00":
                yield day, start, minutes * 60, room, basic, apps
                yield day, "13:30", 30 * 60, "bedroom", "lie", ""
                continue
            if day == 4 and start == "17:00":
                # ends 5 s before the 2-minute boundary: one boundary tick
                # may still read as lying and must not reach the next window
                yield day, start, 115, "worship", "lie", ""
                yield day, "17:01:55", 28 * 60 + 5, "worship", "sit", ""
                continue
            yield day, start, minutes * 60, room, basic, apps


def main():
    days = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    print("clock_start,duration_s,room,basic,appliances")
    for day, start, seconds, room, basic, apps in rows(days):
        clock = start if start.count(":") == 2 else start + ":00"
        prefix = f"{day}." if day else ""
        print(f"{prefix}{clock},{seconds:g},{room},{basic},{apps}")


if __name__ == "__main__":
    main()
