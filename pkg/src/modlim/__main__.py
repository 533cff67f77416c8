from modlim.cli.main import main

raise SystemExit(main())
