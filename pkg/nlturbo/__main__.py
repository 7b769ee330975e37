from nlturbo.main import main

main()
