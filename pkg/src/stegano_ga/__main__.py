from stegano_ga.cli import main

main()
