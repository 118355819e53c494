from gridembed.cli import main

raise SystemExit(main())
