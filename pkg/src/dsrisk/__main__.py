from dsrisk.cli import main

main()
