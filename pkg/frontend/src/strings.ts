// String table stub: single locale for now, keyed for later translation.

const STRINGS: Record<string, string> = {
  "app.title": "NutriQuest",
  "entry.title": "New measurement",
  "entry.estimate_label": "ESTIMATE (offline) - server will confirm",
  "entry.queued": "Saved to outbox",
  "entry.preview": "Preview z-scores",
  "outbox.pending": "measurements waiting to sync",
  "map.title": "Quest map",
  "board.title": "Leaderboard",
  "dashboard.title": "Supervisor dashboard",
  "dashboard.layer.gistar": "Hotspot classes",
  "dashboard.layer.density": "Case density",
  "login.prompt": "Paste your access token",
};

export function t(key: string): string {
  return STRINGS[key] ?? key;
}
