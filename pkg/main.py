from prpsim.simcli import main
main()
