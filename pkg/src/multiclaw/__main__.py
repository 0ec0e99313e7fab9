from multiclaw.cli import main

raise SystemExit(main())
