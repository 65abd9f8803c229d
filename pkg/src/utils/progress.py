from rich.console import Console
from rich.live import Live
from rich.style import Style
from rich.table import Table
from rich.text import Text
from typing import Dict, Optional

console = Console(stderr=True)

RULE_TASKS = ("equal-shares", "equal-shares-eps", "equal-shares-lex", "gcr", "gcr_payments", "pav", "phragmen", "phragmen-skip")

# final statuses and how they are drawn
FINAL_STYLES = {
    "done": ("✓", Style(color="green", bold=True)),
    "satisfied": ("✓", Style(color="green", bold=True)),
    "violated": ("✗", Style(color="red", bold=True)),
    "inconclusive": ("?", Style(color="yellow", bold=True)),
    "error": ("✗", Style(color="red", bold=True)),
}


class SolverProgress:
    """Live status of the rules and axiom checkers working on an instance."""

    def __init__(self):
        self.task_status: Dict[str, Dict] = {}
        self.table = Table(show_header=False, box=None, padding=(0, 1))
        self.live = Live(self.table, console=console, refresh_per_second=4)
        self.started = False
        self.callbacks = []

    def subscribe(self, callback):
        """Subscribe to status updates: callback(task, instance, status)."""
        if callback not in self.callbacks:
            self.callbacks.append(callback)

    def unsubscribe(self, callback):
        if callback in self.callbacks:
            self.callbacks.remove(callback)

    def notify_callbacks(self, task: str, instance: Optional[str], status: str):
        for callback in self.callbacks:
            try:
                callback(task, instance, status)
            except Exception as e:
                console.print(f"Error in progress callback: {str(e)}", style="red")

    def start(self):
        if not self.started:
            self.live.start()
            self.started = True

    def stop(self):
        if self.started:
            self.live.stop()
            self.started = False

    def reset(self):
        """Forget every task, e.g. before moving on to the next fixture."""
        self.task_status.clear()
        if self.started:
            self._refresh_display()

    def update_status(self, task: str, instance: Optional[str] = None, status: str = ""):
        """Record a status line for a task; the table is only redrawn while the display runs."""
        info = self.task_status.setdefault(task, {"status": "", "instance": None, "updates": 0})
        if instance:
            info["instance"] = instance
        if status:
            info["status"] = status
        info["updates"] += 1

        if self.started:
            self._refresh_display()
        self.notify_callbacks(task, instance, status)

    def _refresh_display(self):
        self.table.columns.clear()
        self.table.add_column(width=100)

        # rules first, then checkers
        def sort_key(item):
            task = item[0]
            return (0 if task in RULE_TASKS else 1, task)

        for task, info in sorted(self.task_status.items(), key=sort_key):
            status = info["status"]
            symbol, style = FINAL_STYLES.get(status.lower(), ("⋯", Style(color="yellow")))

            status_text = Text()
            status_text.append(f"{symbol} ", style=style)
            status_text.append(f"{task.replace('_', ' ').replace('-', ' ').title():<24}", style=Style(bold=True))
            if info["instance"]:
                status_text.append(f"[{info['instance']}] ", style=Style(color="cyan"))
            status_text.append(status, style=style)
            if status.lower() not in FINAL_STYLES and info["updates"] > 1:
                status_text.append(f" ({info['updates']} steps)", style=Style(dim=True))

            self.table.add_row(status_text)


# Create a global instance
progress = SolverProgress()
