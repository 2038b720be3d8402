from manybody.cli import run

run()
