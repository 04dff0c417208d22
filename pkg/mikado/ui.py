from typing import Optional

from rich.console import Console
from rich.panel import Panel

console = Console()


def banner(title: str, subtitle: Optional[str] = None) -> None:
    text = title if subtitle is None else f"{title}\n{subtitle}"
    console.print(Panel.fit(text, border_style="cyan"))


def result_panel(body: str, title: str, ok: bool = True) -> None:
    console.print(Panel.fit(body, title=title, border_style="green" if ok else "red"))
