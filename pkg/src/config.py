# config.py
# ----------------------------------------------------------------
# configuration file and constant settings
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

import os

# --- PATHS ---
ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(ROOT_DIR, "data")
CORPUS_DIR = os.path.join(DATA_DIR, "corpus")
CATALOG_FILE = os.path.join(DATA_DIR, "catalog.yaml")
PLOTS_DIR = os.path.join(ROOT_DIR, "plots")

# --- ENVIRONMENT ---
CORPUS_ENV = "ICCTAINT_CORPUS_DIR"
TEST_MODE_ENV = "ICCTAINT_TEST_MODE"

# --- FILE FORMATS (magic, version) ---
LOG_MAGIC = "ICCTAINT-LOG"
LOG_VERSION = 1
META_MAGIC = "icc-meta"
META_VERSION = 1
SCENARIO_MAGIC = "%icc-scenario"
SCENARIO_VERSION = 1
CATALOG_MAGIC = "icc-catalog"
CATALOG_VERSION = 1
REPORT_MAGIC = "icc-report"
REPORT_VERSION = 1
SCENARIO_SUFFIX = ".icc"

# --- SYSTEM COMPONENTS ---
SYSTEM_PACKAGE = "android"
RESOLVER_NAME = "com.android.internal.app.ResolverActivity"

# --- ANALYZER ---
# per-model analysis time measured on device, used as the report's reference point
MODEL_BUDGET_MS = 68.5

# TAINT TAGS: published constants
PUBLISHED_TAGS = {
    "TAINT_LOCATION_Latitude": 0x00010004,
    "TAINT_LOCATION_Longitude": 0x00010008,
    "TAINT_network_state": 0x00010012,
    "TAINT_sharepreference": 0x00010018,
}

# TAINT TAGS: sensitive data families (values assigned from GENERATED_TAG_BASE)
GENERATED_TAG_BASE = 0x00020000

SENSITIVE_FAMILIES = [
    "TAINT_INTENT_EXTRA",  # retaint marker, not a source
    "TAINT_LOCATION", "TAINT_LOCATION_GPS", "TAINT_LOCATION_NET", "TAINT_LOCATION_LAST",
    "TAINT_CONTACTS", "TAINT_CALL_LOG", "TAINT_CALENDAR", "TAINT_ACCOUNTS",
    "TAINT_PHONE_NUMBER", "TAINT_DEVICE_ID", "TAINT_IMEI", "TAINT_IMSI", "TAINT_ICCID",
    "TAINT_SIM_OPERATOR", "TAINT_NETWORK_OPERATOR", "TAINT_VOICEMAIL",
    "TAINT_SMS", "TAINT_MMS", "TAINT_SMS_SENT", "TAINT_SMS_INBOX",
    "TAINT_USER_INPUT", "TAINT_CLIPBOARD", "TAINT_PASSWORD",
    "TAINT_CAMERA", "TAINT_MIC", "TAINT_MEDIA", "TAINT_HISTORY", "TAINT_BOOKMARKS",
    "TAINT_FILE", "TAINT_EXTERNAL_FILE", "TAINT_DATABASE", "TAINT_CONTENT_PROVIDER",
    "TAINT_WIFI_MAC", "TAINT_WIFI_SSID", "TAINT_BLUETOOTH_MAC", "TAINT_IP_ADDRESS",
    "TAINT_INSTALLED_PACKAGES", "TAINT_RUNNING_TASKS", "TAINT_SERIAL",
    "TAINT_ANDROID_ID", "TAINT_ADVERTISING_ID", "TAINT_BROWSER",
]

SENSORS = [
    "ACCELEROMETER", "GYROSCOPE", "MAGNETIC_FIELD", "LIGHT", "PRESSURE",
    "PROXIMITY", "GRAVITY", "ROTATION_VECTOR", "HUMIDITY", "TEMPERATURE",
    "STEP_COUNTER", "HEART_RATE",
]
SENSOR_AXES = ["X", "Y", "Z", "RAW"]

INTENT_EXTRA_TAG = "TAINT_INTENT_EXTRA"
INTENT_EXTRA_METHOD = "putExtra"


def _generated_tag_names():
    names = list(SENSITIVE_FAMILIES)
    for sensor in SENSORS:
        for axis in SENSOR_AXES:
            names.append(f"TAINT_SENSOR_{sensor}_{axis}")
    return names


TAINT_TAGS = dict(PUBLISHED_TAGS)
for _i, _name in enumerate(_generated_tag_names(), start=1):
    TAINT_TAGS[_name] = GENERATED_TAG_BASE + _i

# SOURCE METHODS: method -> (tag name, required permission)
SOURCE_METHODS = {
    "getLatitude": ("TAINT_LOCATION_Latitude", "ACCESS_FINE_LOCATION"),
    "getLongitude": ("TAINT_LOCATION_Longitude", "ACCESS_FINE_LOCATION"),
    "getLastKnownLocation": ("TAINT_LOCATION_LAST", "ACCESS_FINE_LOCATION"),
    "requestLocationUpdates": ("TAINT_LOCATION_GPS", "ACCESS_FINE_LOCATION"),
    "getCellLocation": ("TAINT_LOCATION_NET", "ACCESS_COARSE_LOCATION"),
    "getActiveNetworkInfo": ("TAINT_network_state", "ACCESS_NETWORK_STATE"),
    "getSharedPreferences": ("TAINT_sharepreference", None),
    "getDeviceId": ("TAINT_DEVICE_ID", "READ_PHONE_STATE"),
    "getImei": ("TAINT_IMEI", "READ_PHONE_STATE"),
    "getSubscriberId": ("TAINT_IMSI", "READ_PHONE_STATE"),
    "getSimSerialNumber": ("TAINT_ICCID", "READ_PHONE_STATE"),
    "getLine1Number": ("TAINT_PHONE_NUMBER", "READ_PHONE_STATE"),
    "getSimOperator": ("TAINT_SIM_OPERATOR", None),
    "getNetworkOperator": ("TAINT_NETWORK_OPERATOR", None),
    "getVoiceMailNumber": ("TAINT_VOICEMAIL", "READ_PHONE_STATE"),
    "queryContacts": ("TAINT_CONTACTS", "READ_CONTACTS"),
    "queryCallLog": ("TAINT_CALL_LOG", "READ_CALL_LOG"),
    "queryCalendar": ("TAINT_CALENDAR", "READ_CALENDAR"),
    "getAccounts": ("TAINT_ACCOUNTS", "GET_ACCOUNTS"),
    "querySms": ("TAINT_SMS", "READ_SMS"),
    "getMessageBody": ("TAINT_SMS_INBOX", "RECEIVE_SMS"),
    "getText": ("TAINT_USER_INPUT", None),
    "getPrimaryClip": ("TAINT_CLIPBOARD", None),
    "takePicture": ("TAINT_CAMERA", "CAMERA"),
    "startRecording": ("TAINT_MIC", "RECORD_AUDIO"),
    "readFile": ("TAINT_FILE", None),
    "readExternalFile": ("TAINT_EXTERNAL_FILE", "READ_EXTERNAL_STORAGE"),
    "queryDatabase": ("TAINT_DATABASE", None),
    "queryProvider": ("TAINT_CONTENT_PROVIDER", None),
    "getMacAddress": ("TAINT_WIFI_MAC", "ACCESS_WIFI_STATE"),
    "getSSID": ("TAINT_WIFI_SSID", "ACCESS_WIFI_STATE"),
    "getBluetoothAddress": ("TAINT_BLUETOOTH_MAC", "BLUETOOTH"),
    "getInstalledPackages": ("TAINT_INSTALLED_PACKAGES", None),
    "getRunningTasks": ("TAINT_RUNNING_TASKS", "GET_TASKS"),
    "getSerial": ("TAINT_SERIAL", "READ_PHONE_STATE"),
    "getAndroidId": ("TAINT_ANDROID_ID", None),
    "getBrowserHistory": ("TAINT_HISTORY", "READ_HISTORY_BOOKMARKS"),
    "getAccelerometer": ("TAINT_SENSOR_ACCELEROMETER_RAW", None),
    "getGyroscope": ("TAINT_SENSOR_GYROSCOPE_RAW", None),
}

# SINK METHODS: method -> (required permission, exfiltrating)
SINK_METHODS = {
    "Log": (None, True),
    "sendTextMessage": ("SEND_SMS", True),
    "sendMultimediaMessage": ("SEND_SMS", True),
    "write": ("WRITE_EXTERNAL_STORAGE", True),
    "fileOutputStream": ("WRITE_EXTERNAL_STORAGE", True),
    "openConnection": ("INTERNET", True),
    "socketSend": ("INTERNET", True),
    "bluetoothWrite": ("BLUETOOTH", True),
    "putString": (None, False),
    "databaseInsert": (None, False),
}

# Shareference writes are monitored as a sink without permission
SHARED_WRITE_METHOD = "putString"
