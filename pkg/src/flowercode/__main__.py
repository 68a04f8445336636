from flowercode.cli import main

main()
